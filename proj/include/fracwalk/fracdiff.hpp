#pragma once

// Space-time fractional diffusion: the fundamental solution u(x,t) with
// Fourier transform E_beta(-|kappa|^alpha t^beta), computed by Fourier
// inversion and by subordination of the stable density to the M-Wright
// operational-time density, plus the parametric (t_*, x) path sampler.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/laplace_inversion.hpp"
#include "fracwalk/laws.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/quadrature.hpp"
#include "fracwalk/rng.hpp"
#include "fracwalk/special_functions.hpp"
#include "fracwalk/variates.hpp"

namespace fracwalk {

struct FracDiffProblem {
  double alpha = 2.0;
  double beta = 1.0;
  double t = 1.0;

  void validate() const {
    StabilityParams{alpha, beta}.validate();
    detail::require(t > 0.0 && std::isfinite(t), "evolution time must be positive");
  }
  StabilityParams::Regime regime() const { return StabilityParams{alpha, beta}.regime(); }
};

/// Operational time t_*, physical time t and position x of one path point.
struct SubordinationPair {
  double operational_time = 0.0;
  double physical_time = 0.0;
  double position = 0.0;
};

// ---------------------------------------------------------------------------
// Characteristic function and moments

/// E_beta(-|kappa|^alpha t^beta).
inline double char_function(const FracDiffProblem& p, double kappa) {
  p.validate();
  if (kappa == 0.0) return 1.0;
  const double arg = std::pow(std::abs(kappa), p.alpha) * std::pow(p.t, p.beta);
  if (p.beta == 1.0) return std::exp(-arg);
  return ml_one(p.beta, -arg, unbounded_ml_options()).value;
}

struct VarianceValue {
  bool infinite = false;
  double value = detail::kInf;
};

/// 2 t^beta / Gamma(1+beta) for alpha = 2, infinite otherwise.
inline VarianceValue variance(const FracDiffProblem& p) {
  p.validate();
  if (p.alpha < 2.0) return {true, detail::kInf};
  return {false, 2.0 * std::pow(p.t, p.beta) / std::tgamma(1.0 + p.beta)};
}

/// Transform-domain residual of the Cauchy problem:
/// s^beta U - s^(beta-1) + |kappa|^alpha U with U = s^(beta-1)/(|kappa|^alpha + s^beta).
inline std::complex<double> cauchy_transform(double alpha, double beta, double kappa, std::complex<double> s) {
  const std::complex<double> sb = std::pow(s, beta);
  return sb / s / (std::pow(std::abs(kappa), alpha) + sb);
}

inline double cauchy_residual(double alpha, double beta, double kappa, std::complex<double> s) {
  const std::complex<double> u = cauchy_transform(alpha, beta, kappa, s);
  const std::complex<double> sb = std::pow(s, beta);
  return std::abs(sb * u - sb / s + std::pow(std::abs(kappa), alpha) * u);
}

// ---------------------------------------------------------------------------
// Densities

struct DensityResult {
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> error;
  /// Set when some value is below -10 x its error estimate.
  bool negativity_warning = false;
};

namespace detail {

inline void finish_density(DensityResult& r) {
  for (std::size_t i = 0; i < r.u.size(); ++i)
    if (r.u[i] < -10.0 * std::max(r.error[i], 1e-15)) r.negativity_warning = true;
}

/// Stable-law shortcuts for beta = 1; alpha = 2 and alpha = 1 are closed forms.
inline double stable_delegate(double alpha, double x, double t) { return symmetric_stable_density(alpha, x, t); }

/// (1/pi) int_0^inf cos(k x) E_beta(-k^alpha t^beta) dk for beta < 1.
inline quad::Result fourier_point(double alpha, double beta, double t, double x) {
  const double tb = std::pow(t, beta);
  const auto g = [=](double k) {
    if (k <= 0.0) return 1.0;
    const double arg = std::pow(k, alpha) * tb;
    return std::isfinite(arg) ? ml_one(beta, -arg, unbounded_ml_options()).value : 0.0;
  };
  quad::Result q;
  if (x == 0.0) {
    if (alpha <= 1.0) return {kInf, 0.0};
    q = quad::upper(g, 0.0, 1e-10);
  } else {
    q = quad::cosine_transform(g, std::abs(x), 1e-10);
  }
  return {q.value / kPi, q.error / kPi + 1e-14};
}

}  // namespace detail

/// u(x,t) by cosine-transform quadrature of the characteristic function.
/// beta = 1 short-circuits to the stable density.
inline DensityResult density_fourier(const FracDiffProblem& p, std::span<const double> x_grid) {
  p.validate();
  DensityResult r;
  r.x.assign(x_grid.begin(), x_grid.end());
  for (double x : x_grid) {
    if (p.beta == 1.0) {
      r.u.push_back(detail::stable_delegate(p.alpha, x, p.t));
      r.error.push_back(1e-14);
      continue;
    }
    const quad::Result q = detail::fourier_point(p.alpha, p.beta, p.t, x);
    if (!std::isfinite(q.value) && !(x == 0.0 && p.alpha <= 1.0))
      throw QuadratureError("Fourier inversion failed at x = " + std::to_string(x));
    r.u.push_back(q.value);
    r.error.push_back(q.error);
  }
  detail::finish_density(r);
  return r;
}

/// Closed form for alpha = 2: u = t^(-beta/2) M_(beta/2)(|x| t^(-beta/2)) / 2.
inline double density_gaussian_closed(double beta, double t, double x) {
  detail::require(beta > 0.0 && beta <= 1.0 && t > 0.0, "need 0 < beta <= 1 and t > 0");
  if (beta == 1.0) return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * detail::kPi * t);
  const double s = std::pow(t, -beta / 2.0);
  return 0.5 * s * mwright(beta / 2.0, std::abs(x) * s, unbounded_mwright_options()).value;
}

/// Operational-time density q0(r,t) = t^(-beta) M_beta(r t^(-beta)).
inline double subordinator_density(double beta, double r, double t) {
  detail::require(beta > 0.0 && beta < 1.0, "subordinator exponent must lie in (0, 1)");
  detail::require(r >= 0.0 && t > 0.0, "need r >= 0 and t > 0");
  const double tb = std::pow(t, -beta);
  return tb * mwright(beta, r * tb, unbounded_mwright_options()).value;
}

/// One-sided stable density with Laplace transform exp(-s^beta), by Talbot inversion.
inline EvalResult<double> one_sided_stable_density_inversion(double beta, double t) {
  detail::require(beta > 0.0 && beta < 1.0 && t > 0.0, "need 0 < beta < 1 and t > 0");
  return talbot_invert([=](std::complex<double> s) { return std::exp(-std::pow(s, beta)); }, t);
}

/// The stable form q0(r,t) = (t/beta) r^(-1-1/beta) L_beta(t r^(-1/beta)) with
/// L_beta from Laplace inversion.
inline EvalResult<double> subordinator_density_stable_form(double beta, double r, double t) {
  detail::require(r > 0.0 && t > 0.0, "need r > 0 and t > 0");
  const double y = t * std::pow(r, -1.0 / beta);
  const EvalResult<double> l = one_sided_stable_density_inversion(beta, y);
  const double pref = t / beta * std::pow(r, -1.0 - 1.0 / beta);
  return {pref * l.value, pref * l.abs_error_bound, Method::integral};
}

/// s^(beta-1) exp(-r s^beta): Laplace transform in t of q0(r,t); zero for r < 0.
inline std::complex<double> drift_solution_transform(double beta, double r, std::complex<double> s) {
  detail::require(beta > 0.0 && beta <= 1.0, "exponent must lie in (0, 1]");
  if (r < 0.0) return 0.0;
  const std::complex<double> sb = std::pow(s, beta);
  return sb / s * std::exp(-r * sb);
}

inline double drift_solution_transform(double beta, double r, double s) {
  detail::require(s > 0.0, "Laplace variable must be positive");
  return drift_solution_transform(beta, r, std::complex<double>(s, 0.0)).real();
}

/// q0(r,t) recovered by Talbot inversion of the transform in s. beta = 1 is
/// the point mass delta(t - r) and has no pointwise inverse.
inline EvalResult<double> drift_solution_inverse(double beta, double r, double t) {
  detail::require(beta > 0.0 && beta < 1.0, "beta = 1 inverts to a point mass");
  detail::require(r > 0.0 && t > 0.0, "need r > 0 and t > 0");
  return talbot_invert([=](std::complex<double> s) { return drift_solution_transform(beta, r, s); }, t);
}

namespace detail {

/// z beyond which M_beta(z) < 1e-12, plus breakpoints around its bulk.
inline std::vector<double> subordination_breaks(double beta) {
  double z = 1.0;
  while (mwright(beta, z, unbounded_mwright_options()).value > 1e-12) z *= 1.5;
  const double mean = 1.0 / std::tgamma(1.0 + beta);
  const double sd = std::sqrt(std::max(0.0, 2.0 / std::tgamma(1.0 + 2.0 * beta) - mean * mean));
  std::vector<double> b{0.0};
  for (int k = -6; k <= 6; k += 2) {
    const double v = mean + k * sd;
    if (v > b.back() && v < z) b.push_back(v);
  }
  b.push_back(z);
  return b;
}

/// M_beta memoized by argument; the quadrature nodes repeat across x.
class MWrightCache {
 public:
  explicit MWrightCache(double beta) : beta_(beta) {}
  double operator()(double z) {
    const auto it = values_.find(z);
    if (it != values_.end()) return it->second;
    const double m = mwright(beta_, z, unbounded_mwright_options()).value;
    values_.emplace(z, m);
    return m;
  }

 private:
  double beta_;
  std::unordered_map<double, double> values_;
};

inline quad::Result subordination_point(double alpha, double beta, double t, double x,
                                        std::span<const double> breaks, MWrightCache& m_beta) {
  if (x == 0.0 && alpha <= 1.0) return {kInf, 0.0};
  const double tb = std::pow(t, beta);
  const auto f = [&, tb](double z) {
    const double r = tb * z;
    if (!(r > 0.0)) return 0.0;
    const double m = m_beta(z);
    return m == 0.0 ? 0.0 : symmetric_stable_density(alpha, x, r) * m;
  };
  return quad::piecewise(f, breaks, 1e-10);
}

}  // namespace detail

/// u(x,t) = int_0^inf f_alpha(x, t^beta z) M_beta(z) dz, truncated where M_beta < 1e-12.
/// beta = 1 delegates to the stable density f_alpha(x, t).
inline DensityResult density_subordination(const FracDiffProblem& p, std::span<const double> x_grid) {
  p.validate();
  DensityResult r;
  r.x.assign(x_grid.begin(), x_grid.end());
  if (p.beta == 1.0) {
    for (double x : x_grid) {
      r.u.push_back(detail::stable_delegate(p.alpha, x, p.t));
      r.error.push_back(1e-14);
    }
    return r;
  }
  const std::vector<double> breaks = detail::subordination_breaks(p.beta);
  detail::MWrightCache m_beta(p.beta);
  for (double x : x_grid) {
    const quad::Result q = detail::subordination_point(p.alpha, p.beta, p.t, x, breaks, m_beta);
    if (!std::isfinite(q.value) && !(x == 0.0 && p.alpha <= 1.0))
      throw QuadratureError("subordination integral failed at x = " + std::to_string(x));
    r.u.push_back(q.value);
    r.error.push_back(q.error);
  }
  detail::finish_density(r);
  return r;
}

/// Mass of u(.,t) outside [-L, L] from the tail |x|^(-1-alpha) b t^beta/Gamma(1+beta);
/// zero for alpha = 2.
inline double density_tail_mass(const FracDiffProblem& p, double L) {
  if (p.alpha == 2.0) return 0.0;
  const double b = std::tgamma(p.alpha + 1.0) * std::sin(p.alpha * detail::kPi / 2.0) / detail::kPi;
  return 2.0 * b / p.alpha * std::pow(L, -p.alpha) * std::pow(p.t, p.beta) / std::tgamma(1.0 + p.beta);
}

// ---------------------------------------------------------------------------
// Parametric subordination

/// One path on the operational grid t_* = k dt_star, k = 0..n_steps: physical
/// time from one-sided stable increments dt_star^(1/beta) L, position from
/// symmetric stable increments dt_star^(1/alpha) S. beta = 1 gives t = t_*.
inline std::vector<SubordinationPair> simulate_parametric_subordination(const FracDiffProblem& p, double dt_star,
                                                                        std::size_t n_steps, RngStream& rng) {
  StabilityParams{p.alpha, p.beta}.validate();
  detail::require(dt_star > 0.0 && std::isfinite(dt_star), "operational step must be positive");
  const double ts = std::pow(dt_star, 1.0 / p.beta);
  const double xs = std::pow(dt_star, 1.0 / p.alpha);
  std::vector<SubordinationPair> path;
  path.reserve(n_steps + 1);
  path.push_back({0.0, 0.0, 0.0});
  double t = 0.0, x = 0.0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    t = p.beta == 1.0 ? static_cast<double>(k) * dt_star : t + ts * sample_one_sided_stable(p.beta, rng);
    x += xs * sample_sym_stable(p.alpha, rng);
    path.push_back({static_cast<double>(k) * dt_star, t, x});
  }
  return path;
}

/// Position and operational time at physical time t: the last grid point whose
/// physical time does not exceed t (x(t) = y(t_*(t))).
inline SubordinationPair read_at(std::span<const SubordinationPair> path, double t) {
  detail::require(!path.empty(), "empty path");
  if (path.back().physical_time <= t) throw RangeError("path does not reach the requested physical time");
  const auto it = std::upper_bound(path.begin(), path.end(), t,
                                   [](double v, const SubordinationPair& q) { return v < q.physical_time; });
  SubordinationPair q = *(it - 1);
  q.physical_time = t;
  return q;
}

struct SubordinationSample {
  std::vector<double> times;
  /// positions[i][p] and operational[i][p] at times[i] for path p.
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> operational;
};

/// Many paths read at the given increasing physical times. Each path runs the
/// physical-time grid until it passes the last observation time. Positions are
/// drawn only at the observation times: the increment of y over m operational
/// steps is (m dt_star)^(1/alpha) S, the same law as the sum of m step increments.
inline SubordinationSample sample_subordination(const FracDiffProblem& p, double dt_star, std::span<const double> times,
                                                std::size_t n_paths, const RngStream& rng, unsigned threads = 1,
                                                std::size_t max_steps = 100'000'000) {
  StabilityParams{p.alpha, p.beta}.validate();
  detail::require(dt_star > 0.0, "operational step must be positive");
  detail::require(!times.empty(), "need observation times");
  for (std::size_t i = 0; i < times.size(); ++i)
    detail::require(times[i] > 0.0 && (i == 0 || times[i] > times[i - 1]), "times must be positive and increasing");
  const double ts = std::pow(dt_star, 1.0 / p.beta);
  SubordinationSample out;
  out.times.assign(times.begin(), times.end());
  out.positions.assign(times.size(), std::vector<double>(n_paths));
  out.operational.assign(times.size(), std::vector<double>(n_paths));
  parallel_for(n_paths, threads, [&](std::size_t path) {
    RngStream r = RngStream::for_path(rng.seed(), rng.stream_id(), path);
    double t = 0.0;
    std::size_t k = 0, i = 0;
    std::vector<std::size_t> steps(times.size());
    if (p.beta == 1.0) {
      for (std::size_t j = 0; j < times.size(); ++j)
        steps[j] = static_cast<std::size_t>(std::floor(times[j] / dt_star));
    } else {
      while (i < times.size()) {
        const double t_next = t + ts * sample_one_sided_stable(p.beta, r);
        while (i < times.size() && times[i] < t_next) steps[i++] = k;
        if (++k > max_steps) throw BudgetError("subordination path exceeded its step budget");
        t = t_next;
      }
    }
    double x = 0.0;
    std::size_t prev = 0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const std::size_t m = steps[j] - prev;
      if (m > 0) x += std::pow(static_cast<double>(m) * dt_star, 1.0 / p.alpha) * sample_sym_stable(p.alpha, r);
      prev = steps[j];
      out.positions[j][path] = x;
      out.operational[j][path] = static_cast<double>(steps[j]) * dt_star;
    }
  });
  return out;
}

}  // namespace fracwalk
