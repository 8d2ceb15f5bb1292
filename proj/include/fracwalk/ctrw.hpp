#pragma once

// Continuous-time random walk: path simulation, the Montroll-Weiss transform
// algebra, the series representation p = sum_n v_n(t) w_n(x), the rescaling and
// respeeding transforms, and diagnostics for the well-scaled diffusion limit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/laws.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/rng.hpp"
#include "fracwalk/special_functions.hpp"
#include "fracwalk/stats.hpp"
#include "fracwalk/variates.hpp"

namespace fracwalk {

// ---------------------------------------------------------------------------
// Scales

/// Spatial scale h, temporal scale tau, respeeding factor a and the scaling
/// ratio mu h^alpha / (lambda tau^beta).
struct ScaleState {
  double h = 1.0;
  double tau = 1.0;
  double a = 1.0;
  double ratio = 1.0;

  static double scaling_ratio(const WaitingLaw& waiting, const JumpLaw& jump, double h, double tau) {
    return jump.mu_scale() * std::pow(h, jump.alpha()) / (waiting.lambda_scale() * std::pow(tau, waiting.beta()));
  }

  static ScaleState make(const WaitingLaw& waiting, const JumpLaw& jump, double h, double tau, double a = 1.0) {
    detail::require(h > 0.0 && std::isfinite(h), "spatial scale must be > 0");
    detail::require(tau > 0.0 && std::isfinite(tau), "temporal scale must be > 0");
    detail::require(a > 0.0 && std::isfinite(a), "respeeding factor must be > 0");
    return ScaleState{h, tau, a, scaling_ratio(waiting, jump, h, tau)};
  }

  /// tau = ((mu/lambda) h^alpha)^(1/beta), so the ratio is 1.
  static ScaleState well_scaled_from(const WaitingLaw& waiting, const JumpLaw& jump, double h, double a = 1.0) {
    detail::require(std::isfinite(jump.mu_scale()), "jump law has no scaling constant mu");
    detail::require(h > 0.0 && std::isfinite(h), "spatial scale must be > 0");
    const double tau =
        std::pow(jump.mu_scale() / waiting.lambda_scale() * std::pow(h, jump.alpha()), 1.0 / waiting.beta());
    return make(waiting, jump, h, tau, a);
  }

  bool well_scaled() const { return std::abs(ratio - 1.0) < 1e-9; }

  bool consistent_with(const WaitingLaw& waiting, const JumpLaw& jump) const {
    const double r = scaling_ratio(waiting, jump, h, tau);
    if (!std::isfinite(r) || !std::isfinite(ratio)) return r == ratio;
    return std::abs(r - ratio) <= 1e-12 * std::max(1.0, std::abs(r));
  }
};

struct CtrwConfig {
  WaitingLaw waiting = WaitingLaw::exponential(1.0);
  JumpLaw jump = JumpLaw::two_point();
  ScaleState scale;
  std::size_t n_paths = 1000;
  std::vector<double> observation_times{1.0};

  /// Config with h = tau = a = 1.
  static CtrwConfig unit(const WaitingLaw& waiting, const JumpLaw& jump, std::size_t n_paths,
                         std::vector<double> times) {
    return CtrwConfig{waiting, jump, ScaleState::make(waiting, jump, 1.0, 1.0), n_paths, std::move(times)};
  }

  void validate() const {
    detail::require(n_paths > 0, "n_paths must be positive");
    detail::require(!observation_times.empty(), "observation times must be nonempty");
    for (std::size_t i = 0; i < observation_times.size(); ++i) {
      detail::require(observation_times[i] >= 0.0 && std::isfinite(observation_times[i]),
                      "observation times must be finite and nonnegative");
      if (i > 0)
        detail::require(observation_times[i] > observation_times[i - 1], "observation times must be strictly increasing");
    }
    detail::require(scale.h > 0.0 && scale.tau > 0.0 && scale.a > 0.0, "scales must be positive");
    detail::require(scale.consistent_with(waiting, jump), "stored scaling ratio does not match the laws");
  }
};

// ---------------------------------------------------------------------------
// Simulation

struct CtrwOptions {
  std::size_t max_events_per_path = 50'000'000;
  unsigned threads = 1;
};

/// positions[i][p] = x(t_i) on path p.
struct CtrwSample {
  std::vector<double> observation_times;
  std::vector<std::vector<double>> positions;
  std::uint64_t total_events = 0;
};

/// Right-continuous paths from x = 0, jumps h X_n at the instants tau t_n.
/// Respeeding is not applied pathwise; a factor a < 1 is realized by
/// thinning (each event keeps its jump with probability a), which has the
/// respeeded waiting transform a f/(1-(1-a) f). a > 1 has no pathwise form.
inline CtrwSample simulate_ctrw(const CtrwConfig& cfg, const RngStream& rng, const CtrwOptions& opt = {}) {
  cfg.validate();
  detail::require(cfg.scale.a <= 1.0, "respeeding with a > 1 exists only in the transform domain");
  const std::size_t n_obs = cfg.observation_times.size();
  CtrwSample out;
  out.observation_times = cfg.observation_times;
  out.positions.assign(n_obs, std::vector<double>(cfg.n_paths, 0.0));
  std::vector<std::uint64_t> events(cfg.n_paths, 0);
  const bool thin = cfg.scale.a < 1.0;

  parallel_for(cfg.n_paths, opt.threads, [&](std::size_t p) {
    RngStream r = RngStream::for_path(rng.seed(), rng.stream_id(), p);
    double clock = 0.0;
    double x = 0.0;
    std::size_t i = 0;
    std::uint64_t n = 0;
    while (i < n_obs) {
      clock += cfg.scale.tau * sample_waiting(cfg.waiting, r);
      while (i < n_obs && cfg.observation_times[i] < clock) out.positions[i++][p] = x;
      if (i == n_obs) break;
      if (++n > opt.max_events_per_path) throw BudgetError("CTRW path exceeded its event budget");
      if (thin && r.uniform() >= cfg.scale.a) continue;
      x += cfg.scale.h * sample_jump(cfg.jump, r);
    }
    events[p] = n;
  });
  for (auto e : events) out.total_events += e;
  return out;
}

// ---------------------------------------------------------------------------
// Empirical fields

struct EmpiricalField {
  enum class Kind { density_histogram, char_function };

  Kind kind = Kind::char_function;
  /// Bin edges (histogram) or wavenumbers (characteristic function).
  std::vector<double> grid;
  std::vector<double> values;
  /// Per-point standard errors of the characteristic function.
  std::vector<double> std_errors;
  /// Histogram mass outside [grid.front(), grid.back()).
  double mass_below = 0.0;
  double mass_above = 0.0;
  std::size_t n_samples = 0;
  double t = 0.0;

  double bin_width(std::size_t i) const { return grid[i + 1] - grid[i]; }

  /// Sum of values * bin width plus the outside mass.
  double total_mass() const {
    double m = mass_below + mass_above;
    for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * bin_width(i);
    return m;
  }
};

/// Histogram estimate normalized by the full sample count; samples outside
/// [lo, hi) go to mass_below / mass_above.
inline EmpiricalField empirical_density(std::span<const double> xs, double t, double lo, double hi, std::size_t bins) {
  detail::require(!xs.empty(), "need samples");
  stats::Histogram hist(lo, hi, bins);
  for (double x : xs) hist.add(x);
  EmpiricalField f;
  f.kind = EmpiricalField::Kind::density_histogram;
  f.n_samples = xs.size();
  f.t = t;
  for (std::size_t i = 0; i <= bins; ++i) f.grid.push_back(lo + (hi - lo) * static_cast<double>(i) / bins);
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < bins; ++i) f.values.push_back(hist.counts[i] / n / f.bin_width(i));
  f.mass_below = hist.below / n;
  f.mass_above = hist.above / n;
  return f;
}

/// Real part of E exp(i kappa x) with per-point sample standard errors.
inline EmpiricalField empirical_char_function(std::span<const double> xs, std::span<const double> kappas, double t) {
  detail::require(!xs.empty(), "need samples");
  EmpiricalField f;
  f.kind = EmpiricalField::Kind::char_function;
  f.n_samples = xs.size();
  f.t = t;
  f.grid.assign(kappas.begin(), kappas.end());
  const double n = static_cast<double>(xs.size());
  for (double k : kappas) {
    if (k == 0.0) {
      f.values.push_back(1.0);
      f.std_errors.push_back(0.0);
      continue;
    }
    stats::Moments m;
    for (double x : xs) m.add(std::cos(k * x));
    f.values.push_back(m.mean);
    f.std_errors.push_back(n > 1.0 ? std::sqrt(m.variance() / n) : 1.0);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Variance under heavy tails

struct VarianceEstimate {
  bool converged = false;
  double value = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

/// Median-of-means over batches of squared deviations. If the largest batch
/// mean exceeds the smallest by more than 5x the estimate is reported as
/// non-convergent.
inline VarianceEstimate variance_diagnostic(std::span<const double> xs, std::size_t batches = 10) {
  detail::require(batches >= 2 && xs.size() >= 2 * batches, "need at least two samples per batch");
  const double mean = stats::moments(xs).mean;
  const std::size_t per = xs.size() / batches;
  std::vector<double> bm(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += (xs[i] - mean) * (xs[i] - mean);
    bm[b] = s / static_cast<double>(per);
  }
  const auto [mn, mx] = std::minmax_element(bm.begin(), bm.end());
  VarianceEstimate v;
  if (!(*mx <= 5.0 * *mn)) {
    v.note = "heavy-tailed / non-convergent";
    return v;
  }
  std::vector<double> sorted = bm;
  std::sort(sorted.begin(), sorted.end());
  v.converged = true;
  v.value = stats::moments(xs).variance();
  v.std_error = stats::variance_std_error(xs);
  v.note = "batch median " + std::to_string(0.5 * (sorted[(batches - 1) / 2] + sorted[batches / 2]));
  return v;
}

/// Variance of CTRW positions: infinite-variance jump laws short-circuit to
/// the non-convergent outcome, others go through the batch diagnostic.
inline VarianceEstimate ctrw_variance(const JumpLaw& jump, std::span<const double> xs, std::size_t batches = 10) {
  if (!jump.finite_variance()) {
    VarianceEstimate v;
    v.note = "heavy-tailed / non-convergent";
    return v;
  }
  return variance_diagnostic(xs, batches);
}

// ---------------------------------------------------------------------------
// Transforms

namespace detail {

/// 1 - f(s) for a waiting law, complex s, without cancellation.
inline std::complex<double> waiting_one_minus(const WaitingLaw& law, std::complex<double> s) {
  switch (law.kind()) {
    case WaitingLaw::Kind::exponential:
      return s / (law.rate() + s);
    case WaitingLaw::Kind::mittag_leffler: {
      const std::complex<double> sb = std::pow(s, law.beta());
      return sb / (1.0 + sb);
    }
    case WaitingLaw::Kind::pareto:
      require(s.imag() == 0.0, "Pareto waiting transform is available for real s only");
      return law.one_minus_laplace(s.real());
  }
  return 0.0;
}

/// 1 - w(k) for a jump law.
inline std::complex<double> jump_one_minus(const JumpLaw& law, double k) {
  if (law.kind() == JumpLaw::Kind::unit_drift) {
    const double sh = std::sin(0.5 * k);
    return {2.0 * sh * sh, -std::sin(k)};
  }
  return law.one_minus_fourier(k);
}

/// 1 - f_{tau,a}(s) = m / (a + (1-a) m) with m = 1 - f(tau s).
inline std::complex<double> respeed_one_minus(const WaitingLaw& law, double tau, double a, std::complex<double> s) {
  const std::complex<double> m = waiting_one_minus(law, tau * s);
  return m / (a + (1.0 - a) * m);
}

inline void check_s(std::complex<double> s) { require(s.real() > 0.0, "Laplace variable needs positive real part"); }

}  // namespace detail

/// f_{tau,a}(s) = a f(tau s) / (1 - (1-a) f(tau s)).
inline std::complex<double> respeed_transform(const WaitingLaw& law, double tau, double a, std::complex<double> s) {
  detail::require(tau > 0.0 && a > 0.0, "scales must be positive");
  detail::check_s(s);
  const std::complex<double> m = detail::waiting_one_minus(law, tau * s);
  return a * (1.0 - m) / (a + (1.0 - a) * m);
}

inline double respeed_transform(const WaitingLaw& law, double tau, double a, double s) {
  return respeed_transform(law, tau, a, std::complex<double>(s, 0.0)).real();
}

/// Memory kernel transform H(s) = (1 - f(s)) / (s f(s)).
inline std::complex<double> memory_transform(const WaitingLaw& law, std::complex<double> s) {
  detail::check_s(s);
  const std::complex<double> m = detail::waiting_one_minus(law, s);
  return m / (s * (1.0 - m));
}

inline double memory_transform(const WaitingLaw& law, double s) {
  return memory_transform(law, std::complex<double>(s, 0.0)).real();
}

/// Waiting transform recovered from the memory kernel: 1 / (1 + s H(s)).
inline std::complex<double> waiting_from_memory(std::complex<double> s, std::complex<double> memory) {
  return 1.0 / (1.0 + s * memory);
}

/// Fourier-Laplace transform of p(x,t):
/// [(1 - f(tau s))/s] / (1 - w(h kappa) f(tau s)), with respeeding a.
inline std::complex<double> montroll_weiss(const CtrwConfig& cfg, double kappa, std::complex<double> s) {
  detail::check_s(s);
  const std::complex<double> mf = detail::respeed_one_minus(cfg.waiting, cfg.scale.tau, cfg.scale.a, s);
  const std::complex<double> mw = detail::jump_one_minus(cfg.jump, cfg.scale.h * kappa);
  if (mw == 0.0) return 1.0 / s;
  return (mf / s) / (mw + mf - mw * mf);
}

/// First n_terms of the geometric expansion [(1-f)/s] sum_n (w f)^n.
inline std::complex<double> montroll_weiss_partial(const CtrwConfig& cfg, double kappa, std::complex<double> s,
                                                   std::size_t n_terms) {
  detail::check_s(s);
  const std::complex<double> mf = detail::respeed_one_minus(cfg.waiting, cfg.scale.tau, cfg.scale.a, s);
  const std::complex<double> mw = detail::jump_one_minus(cfg.jump, cfg.scale.h * kappa);
  const std::complex<double> ratio = (1.0 - mw) * (1.0 - mf);
  std::complex<double> sum = 0.0, term = 1.0;
  for (std::size_t n = 0; n < n_terms; ++n) {
    sum += term;
    term *= ratio;
  }
  return mf / s * sum;
}

/// Limit transform s^(beta-1) / (|kappa|^alpha + s^beta).
inline double diffusion_limit_transform(double alpha, double beta, double kappa, double s) {
  return std::pow(s, beta - 1.0) / (std::pow(std::abs(kappa), alpha) + std::pow(s, beta));
}

struct DiffusionGapRow {
  double h = 0.0;
  double tau = 0.0;
  double value = 0.0;
  double target = 0.0;
  double gap = 0.0;
};

/// Deviation of the well-scaled CTRW transform from its limit at fixed (kappa, s)
/// for a decreasing sequence of spatial scales.
inline std::vector<DiffusionGapRow> diffusion_limit_gap(const WaitingLaw& waiting, const JumpLaw& jump, double kappa,
                                                        double s, std::span<const double> h_seq) {
  detail::require(s > 0.0, "Laplace variable must be positive");
  for (std::size_t i = 1; i < h_seq.size(); ++i)
    detail::require(h_seq[i] < h_seq[i - 1], "spatial scales must be decreasing");
  const double target = diffusion_limit_transform(jump.alpha(), waiting.beta(), kappa, s);
  std::vector<DiffusionGapRow> rows;
  for (double h : h_seq) {
    CtrwConfig cfg{waiting, jump, ScaleState::well_scaled_from(waiting, jump, h), 1, {1.0}};
    DiffusionGapRow row;
    row.h = h;
    row.tau = cfg.scale.tau;
    row.value = montroll_weiss(cfg, kappa, s).real();
    row.target = target;
    row.gap = std::abs(row.value - target);
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<DiffusionGapRow> diffusion_limit_gap(const CtrwConfig& cfg, double kappa, double s,
                                                        std::span<const double> h_seq) {
  return diffusion_limit_gap(cfg.waiting, cfg.jump, kappa, s, h_seq);
}

// ---------------------------------------------------------------------------
// Series representation

struct SeriesSolution {
  /// Cell centres; each cell has width dx.
  std::vector<double> x;
  /// Probability mass per cell.
  std::vector<double> mass;
  /// mass / dx.
  std::vector<double> density;
  double dx = 0.0;
  std::size_t n_terms = 0;
  /// P(N(t) >= n_terms), the mass of the dropped terms.
  double tail_mass = 0.0;
  /// Jump mass pushed off the working grid, weighted by v_n.
  double lost_mass = 0.0;
};

struct SeriesOptions {
  double tail_mass = 1e-6;
  /// Time-grid points for the Pareto counting distribution.
  std::size_t time_nodes = 1000;
  /// Working grid half-width as a multiple of the requested half-width.
  double pad_factor = 2.0;
};

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(X <= x) for the symmetric Pareto law.
inline double sym_pareto_cdf(double alpha, double theta, double x) {
  if (x >= theta) return 1.0 - 0.5 * std::pow(x / theta, -alpha);
  if (x <= -theta) return 0.5 * std::pow(-x / theta, -alpha);
  return 0.5;
}

/// Mass of h X in the cells [(k - 1/2) dx, (k + 1/2) dx), k = -K..K.
inline std::vector<double> jump_cell_masses(const JumpLaw& law, double h, double dx, std::ptrdiff_t K) {
  const std::size_t n = static_cast<std::size_t>(2 * K + 1);
  std::vector<double> w(n, 0.0);
  const auto put_atom = [&](double at) {
    const double k = std::round(at / dx);
    if (std::abs(k) <= static_cast<double>(K)) w[static_cast<std::size_t>(k + static_cast<double>(K))] += 1.0;
  };
  const auto from_cdf = [&](auto&& cdf) {
    double prev = cdf((-static_cast<double>(K) - 0.5) * dx / h);
    for (std::size_t i = 0; i < n; ++i) {
      const double right = (static_cast<double>(i) - static_cast<double>(K) + 0.5) * dx / h;
      const double cur = cdf(right);
      w[i] = std::max(0.0, cur - prev);
      prev = cur;
    }
  };
  switch (law.kind()) {
    case JumpLaw::Kind::two_point:
      put_atom(h);
      put_atom(-h);
      for (auto& v : w) v *= 0.5;
      break;
    case JumpLaw::Kind::unit_drift:
      put_atom(h);
      break;
    case JumpLaw::Kind::gaussian: {
      const double sd = std::sqrt(law.sigma2());
      // mass of each side by the upper tail to keep precision far out
      for (std::size_t i = 0; i < n; ++i) {
        const double c = static_cast<double>(i) - static_cast<double>(K);
        const double lo = (c - 0.5) * dx / (h * sd), hi = (c + 0.5) * dx / (h * sd);
        w[i] = c >= 0 ? normal_cdf(-lo) - normal_cdf(-hi) : normal_cdf(hi) - normal_cdf(lo);
      }
      break;
    }
    case JumpLaw::Kind::sym_pareto:
      from_cdf([&](double x) { return sym_pareto_cdf(law.alpha(), law.theta(), x); });
      break;
    case JumpLaw::Kind::sym_stable: {
      // Simpson's rule on the density of h X over each cell
      std::vector<double> f(2 * n + 1);
      for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = (-static_cast<double>(K) - 0.5 + 0.5 * static_cast<double>(j)) * dx;
        f[j] = symmetric_stable_density(law.alpha(), x / h, 1.0) / h;
      }
      for (std::size_t i = 0; i < n; ++i) w[i] = dx / 6.0 * (f[2 * i] + 4.0 * f[2 * i + 1] + f[2 * i + 2]);
      break;
    }
  }
  return w;
}

/// P(N(T) = n), n = 0..n_max, for a unit-scale renewal process with the given
/// waiting law, stopping once P(N(T) > n) < tail. Returns the tail mass too.
struct CountingTable {
  std::vector<double> p;
  double tail = 1.0;
};

inline CountingTable counting_table(const WaitingLaw& law, double T, std::size_t n_max, double tail,
                                    std::size_t time_nodes) {
  CountingTable out;
  if (T == 0.0) {
    out.p = {1.0};
    out.tail = 0.0;
    return out;
  }
  switch (law.kind()) {
    case WaitingLaw::Kind::exponential: {
      const double mt = law.rate() * T;
      double total = 0.0;
      for (std::size_t n = 0; n <= n_max; ++n) {
        out.p.push_back(std::exp(static_cast<double>(n) * std::log(mt) - mt - log_gamma(n + 1.0)));
        total += out.p.back();
        out.tail = std::max(0.0, 1.0 - total);
        if (out.tail < tail && static_cast<double>(n) > mt) return out;
      }
      return out;
    }
    case WaitingLaw::Kind::mittag_leffler: {
      double total = 0.0;
      for (std::size_t n = 0; n <= n_max; ++n) {
        out.p.push_back(counting_pmf(law.beta(), T, static_cast<int>(n)));
        total += out.p.back();
        out.tail = std::max(0.0, 1.0 - total);
        if (out.tail < tail && n > 0 && out.p[n] < out.p[n - 1]) return out;
      }
      return out;
    }
    case WaitingLaw::Kind::pareto: {
      // F_n(u) = P(t_n <= u) on a uniform grid; F_{n+1} = F_n * dF with the
      // midpoint value of F_n against the exact cell masses of the waiting law.
      const std::size_t M = time_nodes;
      const double dt = T / static_cast<double>(M);
      std::vector<double> q(M + 1, 0.0);
      for (std::size_t i = 1; i <= M; ++i) q[i] = law.cdf(i * dt) - law.cdf((i - 1) * dt);
      std::vector<double> F(M + 1, 1.0), G(M + 1, 0.0);
      for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t j = 0; j <= M; ++j) {
          if (n == 0) {
            G[j] = law.cdf(j * dt);
            continue;
          }
          double acc = 0.0;
          for (std::size_t i = 1; i <= j; ++i) acc += q[i] * 0.5 * (F[j - i] + F[j - i + 1]);
          G[j] = acc;
        }
        out.p.push_back(std::max(0.0, F[M] - G[M]));
        out.tail = G[M];
        if (out.tail < tail) return out;
        std::swap(F, G);
      }
      return out;
    }
  }
  return out;
}

/// Counting distribution of the rescaled (tau) and thinned (keep probability a) process.
inline CountingTable scaled_counting_table(const WaitingLaw& law, double t, double tau, double a, std::size_t n_max,
                                           double tail, std::size_t time_nodes) {
  switch (law.kind()) {
    case WaitingLaw::Kind::exponential:
      // thinned Poisson stays Poisson with rate a m / tau
      return counting_table(WaitingLaw::exponential(law.rate() * a), t / tau, n_max, tail, time_nodes);
    case WaitingLaw::Kind::mittag_leffler:
      // a / (a + (tau s)^beta) is the Mittag-Leffler law at time scale tau a^(-1/beta)
      return counting_table(law, t * std::pow(a, 1.0 / law.beta()) / tau, n_max, tail, time_nodes);
    case WaitingLaw::Kind::pareto:
      break;
  }
  require(a <= 1.0, "respeeding with a > 1 has no counting distribution for this law");
  if (a == 1.0) return counting_table(law, t / tau, n_max, tail, time_nodes);
  // binomial thinning of the base counts: P(M = n) = sum_k P(N = k) C(k, n) a^n (1-a)^(k-n)
  const CountingTable base = counting_table(law, t / tau, std::numeric_limits<std::size_t>::max() / 2,
                                            tail * 1e-3, time_nodes);
  CountingTable out;
  double total = 0.0;
  for (std::size_t n = 0; n <= n_max && n < base.p.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = n; k < base.p.size(); ++k) {
      const double lb = log_gamma(k + 1.0) - log_gamma(n + 1.0) - log_gamma(static_cast<double>(k - n) + 1.0) +
                        static_cast<double>(n) * std::log(a) + static_cast<double>(k - n) * std::log1p(-a);
      acc += base.p[k] * std::exp(lb);
    }
    out.p.push_back(acc);
    total += acc;
    out.tail = std::max(0.0, 1.0 - total);
    if (out.tail < tail) return out;
  }
  return out;
}

}  // namespace detail

/// p(x,t) = sum_n v_n(t) w_n(x) as cell masses on a uniform grid whose nodes
/// are integer multiples of the spacing. w_n is the n-fold convolution of the
/// jump cell masses on a padded grid; v_n is closed form for exponential and
/// Mittag-Leffler waiting, a time-grid convolution for Pareto waiting.
inline SeriesSolution series_solution(const CtrwConfig& cfg, std::span<const double> x_grid, double t,
                                      std::size_t n_max, const SeriesOptions& opt = {}) {
  detail::require(x_grid.size() >= 2, "grid needs at least two nodes");
  detail::require(t >= 0.0 && std::isfinite(t), "time must be nonnegative");
  detail::require(cfg.scale.h > 0.0 && cfg.scale.tau > 0.0 && cfg.scale.a > 0.0, "scales must be positive");
  const double dx = x_grid[1] - x_grid[0];
  detail::require(dx > 0.0, "grid must be increasing");
  std::vector<std::ptrdiff_t> idx;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double k = x_grid[i] / dx;
    detail::require(std::abs(k - std::round(k)) < 1e-9 * std::max(1.0, std::abs(k)),
                    "grid nodes must be integer multiples of the spacing");
    if (i > 0) detail::require(std::abs(x_grid[i] - x_grid[i - 1] - dx) < 1e-9 * dx, "grid must be uniform");
    idx.push_back(static_cast<std::ptrdiff_t>(std::llround(k)));
  }
  std::ptrdiff_t k_user = 0;
  for (auto k : idx) k_user = std::max(k_user, std::abs(k));
  const auto jump_reach = static_cast<std::ptrdiff_t>(std::ceil(cfg.scale.h / dx)) + 1;
  const std::ptrdiff_t K =
      std::max(static_cast<std::ptrdiff_t>(std::ceil(opt.pad_factor * static_cast<double>(k_user))), k_user + 4 * jump_reach);
  const std::size_t G = static_cast<std::size_t>(2 * K + 1);

  const detail::CountingTable v =
      detail::scaled_counting_table(cfg.waiting, t, cfg.scale.tau, cfg.scale.a, n_max, opt.tail_mass, opt.time_nodes);
  if (!(v.tail < opt.tail_mass))
    throw TruncationError("series needs more than " + std::to_string(n_max) + " terms at t = " + std::to_string(t));

  const std::vector<double> w1 = detail::jump_cell_masses(cfg.jump, cfg.scale.h, dx, K);
  std::size_t lo1 = 0, hi1 = G;
  while (lo1 < G && w1[lo1] == 0.0) ++lo1;
  while (hi1 > lo1 && w1[hi1 - 1] == 0.0) --hi1;

  std::vector<double> wn(G, 0.0), next(G, 0.0), acc(G, 0.0);
  wn[static_cast<std::size_t>(K)] = 1.0;
  double lost = 0.0;
  for (std::size_t n = 0; n < v.p.size(); ++n) {
    if (n > 0) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < G; ++i) {
        if (wn[i] == 0.0) continue;
        for (std::size_t j = lo1; j < hi1; ++j) {
          const std::ptrdiff_t target = static_cast<std::ptrdiff_t>(i + j) - K;
          if (target >= 0 && target < static_cast<std::ptrdiff_t>(G)) next[static_cast<std::size_t>(target)] += wn[i] * w1[j];
        }
      }
      std::swap(wn, next);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < G; ++i) {
      acc[i] += v.p[n] * wn[i];
      total += wn[i];
    }
    lost += v.p[n] * std::max(0.0, 1.0 - total);
  }

  SeriesSolution out;
  out.dx = dx;
  out.n_terms = v.p.size();
  out.tail_mass = v.tail;
  out.lost_mass = lost;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double m = acc[static_cast<std::size_t>(idx[i] + K)];
    out.x.push_back(static_cast<double>(idx[i]) * dx);
    out.mass.push_back(m);
    out.density.push_back(m / dx);
  }
  return out;
}

}  // namespace fracwalk
