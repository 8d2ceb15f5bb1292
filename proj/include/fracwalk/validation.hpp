#pragma once

// Named cross-route checks behind `fracwalk validate` and the acceptance
// binary. Each check records its measured quantities against their limits;
// a check passes when every measurement does.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fracwalk/ctrw.hpp"
#include "fracwalk/detail/bigfloat.hpp"
#include "fracwalk/fracdiff.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/special_functions.hpp"
#include "fracwalk/stats.hpp"

namespace fracwalk::validation {

struct Measurement {
  std::string label;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct CheckReport {
  std::string name;
  int criterion = 0;
  std::vector<Measurement> items;
  std::string error;  // set when the check threw
  double seconds = 0.0;

  bool passed() const {
    if (!error.empty()) return false;
    for (const auto& m : items)
      if (!m.passed) return false;
    return true;
  }

  /// value <= limit; NaN fails.
  void at_most(std::string label, double value, double limit) {
    items.push_back({std::move(label), value, limit, value <= limit});
  }
  void less_than(std::string label, double value, double limit) {
    items.push_back({std::move(label), value, limit, value < limit});
  }
  void holds(std::string label, bool ok) {
    items.push_back({std::move(label), ok ? 1.0 : 0.0, 1.0, ok});
  }
};

struct Options {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct Check {
  std::string name;
  int criterion;
  double budget_seconds;
  bool quick;  // part of the sub-minute subset
  std::function<void(CheckReport&, const Options&)> body;
};

namespace detail {

using fracwalk::detail::BigFloat;
using fracwalk::detail::kPi;

/// E_{alpha,b}(z) for real z by the Taylor series in MPFR, with enough digits to
/// absorb the cancellation and 50 more. Gamma(b + alpha n) advances by the
/// recurrence whenever alpha is a fraction with denominator at most 16.
inline double ml_reference(double alpha, double b, double z) {
  const double w = std::pow(std::abs(z), 1.0 / alpha);
  const unsigned digits = 60 + static_cast<unsigned>(z < 0.0 ? w / std::log(10.0) : 0.0);
  const mpfr_prec_t bits = fracwalk::detail::digits_to_bits(digits);
  int period = 0;
  long shift = 0;
  for (int q = 1; q <= 16; ++q) {
    if (alpha * q == std::round(alpha * q)) {
      period = q;
      shift = std::lround(alpha * q);
      break;
    }
  }
  const BigFloat Z(bits, z);
  const BigFloat A(bits, alpha);
  const BigFloat B(bits, b);
  std::vector<BigFloat> gammas;
  BigFloat power(bits, 1.0);
  BigFloat sum(bits, 0.0);
  const long stop_exp = -static_cast<long>(60 * 3.33);
  int small = 0;
  for (long n = 0;; ++n) {
    if (n > 0) power *= Z;
    BigFloat x = A;
    x *= static_cast<double>(n);
    x += B;
    BigFloat g(bits);
    if (period > 0 && n >= period) {
      g = gammas[static_cast<std::size_t>(n - period)];
      for (long i = 1; i <= shift; ++i) {
        BigFloat f = x;
        f += -static_cast<double>(i);
        g *= f;
      }
    } else {
      g = BigFloat::gamma(x);
    }
    gammas.push_back(g);
    const BigFloat term = power / g;
    sum += term;
    const long ref = std::max(0L, sum.exponent2());
    if (term.is_zero() || term.exponent2() - ref < stop_exp) {
      if (++small > 5 && n * alpha > w) break;
    } else {
      small = 0;
    }
  }
  return sum.to_double();
}

inline double laplace_numeric(const std::function<double(double)>& f, double s) {
  const auto g = [&](double t) { return t <= 0.0 ? 0.0 : std::exp(-s * t) * f(t); };
  const std::array<double, 4> breaks{0.0, 1.0, 50.0, fracwalk::detail::kInf};
  return quad::piecewise(g, breaks, 1e-12).value;
}

inline std::vector<double> simpson_bins(const std::vector<double>& nodes, double width) {
  std::vector<double> m;
  for (std::size_t i = 0; i + 2 < nodes.size(); i += 2)
    m.push_back(width / 6.0 * (nodes[i] + 4.0 * nodes[i + 1] + nodes[i + 2]));
  return m;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

inline void ml_oracle(CheckReport& r, const Options&) {
  double worst = 0.0, worst_two = 0.0;
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    for (int i = 0; i < 50; ++i) {
      const double z = -5.0 + i / 7.0;
      const double want = ml_reference(alpha, 1.0, z);
      const double scale = std::max(1.0, std::abs(want));
      worst = std::max(worst, std::abs(ml_one(alpha, z).value - want) / scale);
      const double want2 = ml_reference(alpha, alpha, z);
      worst_two = std::max(worst_two, std::abs(ml_two(alpha, alpha, z).value - want2) / std::max(1.0, std::abs(want2)));
    }
  }
  r.at_most("ml_one vs 50-digit series, max scaled error over 200 points", worst, 1e-10);
  r.at_most("ml_two(alpha, alpha) vs 50-digit series, max scaled error over 200 points", worst_two, 1e-10);
  double ulps = 0.0;
  for (double t = 0.0; t <= 40.0; t += 0.25) {
    const double e = std::exp(-t);
    ulps = std::max(ulps, std::abs(ml_one(1.0, -t).value - e) / (e * fracwalk::detail::kEps));
  }
  r.at_most("E_1(-t) vs exp(-t) on t in [0, 40], max error in ulps", ulps, 4.0);
}

inline void laplace_pairs(CheckReport& r, const Options&) {
  double phi_err = 0.0, psi_err = 0.0;
  for (double beta : {0.25, 0.5, 0.75}) {
    for (double s : {0.25, 1.0, 4.0}) {
      const double sb = std::pow(s, beta);
      phi_err = std::max(phi_err, std::abs(laplace_numeric([&](double t) { return ml_density(beta, t); }, s) -
                                           1.0 / (1.0 + sb)));
      psi_err = std::max(psi_err, std::abs(laplace_numeric([&](double t) { return ml_survival(beta, t); }, s) -
                                           sb / s / (1.0 + sb)));
    }
  }
  r.at_most("density transform vs 1/(1+s^beta), 9 points", phi_err, 1e-6);
  r.at_most("survival transform vs s^(beta-1)/(1+s^beta), 9 points", psi_err, 1e-6);
}

inline void asymptotics(CheckReport& r, const Options&) {
  const double t = 1e3;
  for (double beta : {0.3, 0.5, 0.8}) {
    const double psi = std::pow(t, -beta) / std::tgamma(1.0 - beta);
    const double phi = std::tgamma(beta + 1.0) * std::sin(beta * kPi) / kPi * std::pow(t, -beta - 1.0);
    r.at_most("beta=" + fmt(beta) + " survival relative error to t^-beta/Gamma(1-beta)",
              std::abs(ml_survival(beta, t) / psi - 1.0), 0.01);
    r.at_most("beta=" + fmt(beta) + " density relative error to its power law",
              std::abs(ml_density(beta, t) / phi - 1.0), 0.01);
  }
}

inline void thinning_universality(CheckReport& r, const Options&) {
  const std::array<double, 3> s_grid{0.25, 1.0, 4.0};
  const std::array<double, 2> taus{1e-2, 1e-4};
  for (double beta : {0.5, 0.75}) {
    const auto rows = thinning_limit_curve(WaitingLaw::pareto(beta, 1.0), s_grid, taus);
    r.less_than("pareto beta=" + fmt(beta) + " sup deviation at tau=1e-4", rows[1].sup_deviation, 0.02);
    r.less_than("pareto beta=" + fmt(beta) + " sup deviation at tau=1e-4 relative to tau=1e-2",
                rows[1].sup_deviation, rows[0].sup_deviation);
  }
}

inline void respeed_invariance(CheckReport& r, const Options&) {
  double worst = 0.0;
  for (double beta : {0.3, 0.6, 0.9, 1.0}) {
    const auto ml = WaitingLaw::mittag_leffler(beta);
    for (double tau : {0.5, 1e-2, 1e-4}) {
      for (double s : {0.25, 1.0, 4.0}) {
        worst = std::max(worst, std::abs(respeed_transform(ml, tau, std::pow(tau, beta), s) -
                                         1.0 / (1.0 + std::pow(s, beta))));
      }
    }
  }
  r.at_most("Mittag-Leffler transform under (tau, a=tau^beta), max change", worst, 1e-12);
  const double tau = 1e-4;
  for (double beta : {0.5, 0.75}) {
    const auto p = WaitingLaw::pareto(beta, 1.0);
    double dev = 0.0;
    for (double s : {0.25, 1.0, 4.0})
      dev = std::max(dev, std::abs(respeed_transform(p, tau, p.lambda_scale() * std::pow(tau, beta), s) -
                                   1.0 / (1.0 + std::pow(s, beta))));
    r.at_most("pareto beta=" + fmt(beta) + " respeeded transform at tau=1e-4, sup over s in {0.25,1,4}", dev, 0.02);
  }
}

inline void montroll_weiss_consistency(CheckReport& r, const Options&) {
  double worst = 0.0;
  bool exact = true;
  for (const auto& w : {WaitingLaw::exponential(1.0), WaitingLaw::mittag_leffler(0.5), WaitingLaw::pareto(0.7, 1.0)}) {
    for (const auto& j : {JumpLaw::gaussian(1.0), JumpLaw::sym_pareto(1.5, 1.0), JumpLaw::two_point(),
                          JumpLaw::sym_stable(1.2)}) {
      const auto cfg = CtrwConfig::unit(w, j, 1, {1.0});
      for (double s : {0.2, 1.0, 5.0}) {
        exact = exact && montroll_weiss(cfg, 0.0, s) == std::complex<double>(1.0 / s, 0.0);
        for (double k : {0.5, 1.0, 2.0}) {
          if (std::abs(w.laplace(s) * j.fourier(k)) > 0.9) continue;
          worst = std::max(worst, std::abs(montroll_weiss_partial(cfg, k, s, 400) - montroll_weiss(cfg, k, s)));
        }
      }
    }
  }
  r.at_most("geometric partial sums vs closed form where |w~ phi^| <= 0.9", worst, 1e-8);
  r.holds("kappa=0 gives exactly 1/s", exact);
}

inline void diffusion_gap(CheckReport& r, const Options&) {
  const std::vector<double> hs{1e-1, 1e-2, 1e-3};
  const auto check = [&](const std::string& label, const WaitingLaw& w, const JumpLaw& j) {
    const auto rows = diffusion_limit_gap(w, j, 1.0, 1.0, hs);
    for (std::size_t i = 1; i < rows.size(); ++i)
      r.less_than(label + " gap at h=" + fmt(rows[i].h) + " below gap at h=" + fmt(rows[i - 1].h), rows[i].gap,
                  rows[i - 1].gap);
  };
  check("exponential + gaussian:", WaitingLaw::exponential(1.0), JumpLaw::gaussian(1.0));
  check("pareto(0.5) + sym_pareto(1.5):", WaitingLaw::pareto(0.5, 1.0), JumpLaw::sym_pareto(1.5, 1.0));
}

inline void subdiffusive_variance(CheckReport& r, const Options& opt) {
  const std::vector<double> ts{1.0, 2.0, 4.0};
  for (double beta : {0.5, 0.8}) {
    const auto w = WaitingLaw::mittag_leffler(beta);
    const auto j = JumpLaw::gaussian(std::sqrt(2.0));
    const CtrwConfig cfg{w, j, ScaleState::well_scaled_from(w, j, 1.0), 100000, ts};
    CtrwOptions o;
    o.threads = opt.threads;
    const auto out = simulate_ctrw(cfg, RngStream(opt.seed, 800 + static_cast<std::uint64_t>(beta * 10)), o);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto& x = out.positions[i];
      const double v = stats::moments(x).variance();
      if (ts[i] != 2.0) {
        const double expect = 2.0 * std::pow(ts[i], beta) / std::tgamma(1.0 + beta);
        r.at_most("beta=" + fmt(beta) + " t=" + fmt(ts[i]) + " |variance - 2t^beta/Gamma(1+beta)| in standard errors",
                  std::abs(v - expect) / stats::variance_std_error(x), 3.0);
      }
      const double lx = std::log(ts[i]), ly = std::log(v);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double n = static_cast<double>(ts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.at_most("beta=" + fmt(beta) + " |log-log variance slope - beta|", std::abs(slope - beta), 0.05);
  }
}

inline void char_function_limit(CheckReport& r, const Options& opt) {
  // h keeps the distance to the limit below a third of a standard error
  struct Case {
    double alpha, beta, h;
  };
  const std::vector<double> ks{0.5, 1.0, 2.0};
  for (const Case c : {Case{2.0, 0.5, 0.05}, Case{1.5, 0.75, 0.02}}) {
    const auto w = WaitingLaw::mittag_leffler(c.beta);
    const auto j = c.alpha == 2.0 ? JumpLaw::gaussian(std::sqrt(2.0)) : JumpLaw::sym_stable(c.alpha);
    const CtrwConfig cfg{w, j, ScaleState::well_scaled_from(w, j, c.h), 100000, {1.0}};
    CtrwOptions o;
    o.threads = opt.threads;
    const auto out = simulate_ctrw(cfg, RngStream(opt.seed, 900 + static_cast<std::uint64_t>(c.alpha * 10)), o);
    const auto f = empirical_char_function(out.positions[0], ks, 1.0);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double target = ml_one(c.beta, -std::pow(ks[i], c.alpha)).value;
      r.at_most("(alpha,beta)=(" + fmt(c.alpha) + "," + fmt(c.beta) + ") kappa=" + fmt(ks[i]) +
                    " |E cos(kappa x) - E_beta(-kappa^alpha)| in standard errors",
                std::abs(f.values[i] - target) / f.std_errors[i], 3.0);
    }
  }
}

inline void subordinator_identities(CheckReport& r, const Options&) {
  double norm = 0.0, lap = 0.0, forms = 0.0;
  for (double beta : {0.3, 0.5, 0.8}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const auto q = [&](double x) { return subordinator_density(beta, x, t); };
      norm = std::max(norm, std::abs(quad::upper(q, 0.0, 1e-10).value - 1.0));
      for (double y : {0.5, 1.0, 2.0}) {
        const auto lq = [&](double x) { return std::exp(-y * x) * subordinator_density(beta, x, t); };
        lap = std::max(lap, std::abs(quad::upper(lq, 0.0, 1e-10).value - ml_one(beta, -y * std::pow(t, beta)).value));
      }
    }
  }
  for (double beta : {0.25, 0.5, 0.75}) {
    for (double x : {0.2, 0.7, 1.5}) {
      for (double t : {0.5, 1.0, 3.0})
        forms = std::max(forms, std::abs(subordinator_density_stable_form(beta, x, t).value -
                                         subordinator_density(beta, x, t)));
    }
  }
  r.at_most("|integral of q0 dr - 1|, beta in {0.3,0.5,0.8}, t in {0.5,1,2}", norm, 1e-6);
  r.at_most("|int e^(-yr) q0 dr - E_beta(-y t^beta)| over 9 (y,t) points per beta", lap, 1e-6);
  r.at_most("M-Wright form vs one-sided stable form of q0", forms, 1e-8);
}

inline void route_triangle(CheckReport& r, const Options& opt) {
  std::vector<double> grid, fine;
  for (int i = -20; i <= 20; ++i) grid.push_back(0.25 * i);
  for (int i = 0; i <= 80; ++i) fine.push_back(-5.0 + 0.125 * i);
  for (auto [a, b] : std::vector<std::pair<double, double>>{{2.0, 0.5}, {1.5, 0.75}}) {
    const FracDiffProblem p{a, b, 1.0};
    const std::string tag = "(alpha,beta)=(" + fmt(a) + "," + fmt(b) + ")";
    const auto f = density_fourier(p, grid);
    const auto s = density_subordination(p, grid);
    double gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(f.u[i] - s.u[i]));
    r.at_most(tag + " Fourier vs subordination density, max on |x|<=5", gap, 1e-4);

    const std::vector<double> times{1.0};
    const auto mc = sample_subordination(p, 2e-3, times, 100000, RngStream(opt.seed, 1100 + static_cast<std::uint64_t>(a * 10)),
                                         opt.threads);
    stats::Histogram h(-5.0, 5.0, 40);
    for (double x : mc.positions[0]) h.add(x);
    const auto ref = simpson_bins(density_fourier(p, fine).u, 0.25);
    double inside = 0.0;
    for (double m : ref) inside += m;
    const double outside = 1.0 - inside;
    r.less_than(tag + " Monte Carlo histogram total variation (1e5 paths)",
                stats::total_variation(h, ref, outside / 2, outside / 2), 0.02);
  }
}

inline void degeneracies(CheckReport& r, const Options& opt) {
  double ml = 0.0, pmf = 0.0, lap = 0.0;
  for (double t : {0.1, 1.0, 3.0, 10.0}) {
    const double e = std::exp(-t);
    ml = std::max(ml, std::abs(ml_survival(1.0, t) - e) / e);
    ml = std::max(ml, std::abs(ml_one(1.0, -t).value - e) / e);
    for (int k = 0; k < 12; ++k)
      pmf = std::max(pmf, std::abs(counting_pmf(1.0, t, k) - std::exp(k * std::log(t) - t - std::lgamma(k + 1.0))));
  }
  const auto one = WaitingLaw::mittag_leffler(1.0);
  for (double s : {0.25, 1.0, 4.0}) {
    lap = std::max(lap, std::abs(one.laplace(s) - 1.0 / (1.0 + s)));
    lap = std::max(lap, std::abs(thinned_laplace(WaitingLaw::exponential(1.0), 0.1, 0.1, s) - 1.0 / (1.0 + s)));
    lap = std::max(lap, std::abs(respeed_transform(one, 0.01, 0.01, s) - 1.0 / (1.0 + s)));
  }
  r.at_most("beta=1 survival and E_1 vs exp(-t), relative", ml, 4 * fracwalk::detail::kEps);
  r.at_most("beta=1 counting pmf vs Poisson", pmf, 1e-12);
  r.at_most("beta=1 waiting, thinning and respeeding transforms vs 1/(1+s)", lap, 1e-15);

  double mw = 0.0;
  const auto j = JumpLaw::gaussian(0.8);
  const auto cfg = CtrwConfig::unit(WaitingLaw::exponential(1.0), j, 1, {1.0});
  for (double k : {0.3, 1.0, 4.0})
    for (double s : {0.5, 1.0, 3.0}) {
      const auto expect = 1.0 / (s + 1.0 - j.characteristic(k));
      mw = std::max(mw, std::abs(montroll_weiss(cfg, k, s) - expect) / std::abs(expect));
    }
  r.at_most("exponential waiting: Montroll-Weiss vs compound Poisson closed form, relative", mw, 1e-12);

  double closed = 0.0, quadrature = 0.0, cf = 0.0;
  const std::vector<double> xs{-3.0, -1.0, 0.0, 0.5, 2.0};
  for (double t : {0.5, 2.0}) {
    const auto g = density_fourier({2.0, 1.0, t}, xs);
    const auto c = density_subordination({1.0, 1.0, t}, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      closed = std::max(closed, std::abs(g.u[i] - std::exp(-xs[i] * xs[i] / (4 * t)) / std::sqrt(4 * kPi * t)));
      closed = std::max(closed, std::abs(c.u[i] - t / kPi / (xs[i] * xs[i] + t * t)));
      if (xs[i] != 0.0) {
        quadrature = std::max(quadrature, std::abs(fracwalk::detail::fourier_point(2.0, 1.0, t, xs[i]).value -
                                                   std::exp(-xs[i] * xs[i] / (4 * t)) / std::sqrt(4 * kPi * t)));
        quadrature = std::max(quadrature,
                              std::abs(fracwalk::detail::fourier_point(1.0, 1.0, t, xs[i]).value - t / kPi / (xs[i] * xs[i] + t * t)));
      }
    }
    for (double k : {0.5, 1.0, 3.0}) {
      cf = std::max(cf, std::abs(char_function({2.0, 1.0, t}, k) - std::exp(-k * k * t)));
      cf = std::max(cf, std::abs(char_function({1.0, 1.0, t}, k) - std::exp(-k * t)));
    }
  }
  r.at_most("beta=1 densities vs Gaussian (alpha=2) and Cauchy (alpha=1)", closed, 1e-15);
  r.at_most("beta=1 Fourier quadrature vs Gaussian and Cauchy", quadrature, 1e-8);
  r.at_most("beta=1 characteristic function vs exp(-|kappa|^alpha t)", cf, 1e-15);
  r.at_most("alpha=2, beta=1 variance vs 2t at t=3", std::abs(variance({2.0, 1.0, 3.0}).value - 6.0), 1e-15);

  RngStream rng(opt.seed, 1200);
  bool same = true;
  for (const auto& pt : simulate_parametric_subordination({1.5, 1.0, 1.0}, 0.01, 300, rng))
    same = same && pt.physical_time == pt.operational_time;
  r.holds("beta=1 parametric paths: physical time equals operational time", same);
}

inline void fractional_poisson_pmf(CheckReport& r, const Options& opt) {
  const std::size_t n = 100000;
  for (double beta : {0.5, 0.9}) {
    for (double t : {1.0, 5.0}) {
      const auto law = WaitingLaw::mittag_leffler(beta);
      std::vector<std::size_t> k(n);
      const std::uint64_t stream = 1300 + static_cast<std::uint64_t>(beta * 10) * 10 + static_cast<std::uint64_t>(t);
      parallel_for(n, opt.threads, [&](std::size_t p) {
        auto rng = RngStream::for_path(opt.seed, stream, p);
        k[p] = counting_number(simulate_renewal(law, t, rng), t);
      });
      std::vector<double> freq;
      for (std::size_t c : k) {
        if (c >= freq.size()) freq.resize(c + 1, 0.0);
        freq[c] += 1.0;
      }
      for (double& f : freq) f /= static_cast<double>(n);
      r.less_than("beta=" + fmt(beta) + " t=" + fmt(t) + " total variation, inversion pmf vs 1e5 paths",
                  stats::total_variation(freq, counting_pmf_table(beta, t)), 0.01);
    }
  }
  double poisson = 0.0;
  for (double t : {1.0, 5.0})
    for (int k = 0; k < 25; ++k)
      poisson = std::max(poisson, std::abs(counting_pmf(1.0, t, k) - std::exp(k * std::log(t) - t - std::lgamma(k + 1.0))));
  r.at_most("beta=1 pmf vs Poisson", poisson, 1e-8);
}

}  // namespace detail

inline const std::vector<Check>& registry() {
  static const std::vector<Check> checks{
      {"ml-oracle", 1, 10, true, detail::ml_oracle},
      {"laplace-pairs", 2, 10, true, detail::laplace_pairs},
      {"asymptotics", 3, 5, true, detail::asymptotics},
      {"thinning-universality", 4, 10, true, detail::thinning_universality},
      {"respeed-invariance", 5, 10, true, detail::respeed_invariance},
      {"montroll-weiss", 6, 5, true, detail::montroll_weiss_consistency},
      {"diffusion-gap", 7, 10, true, detail::diffusion_gap},
      {"subdiffusive-variance", 8, 180, false, detail::subdiffusive_variance},
      {"char-function-limit", 9, 180, false, detail::char_function_limit},
      {"subordinator-identities", 10, 30, true, detail::subordinator_identities},
      {"route-triangle", 11, 300, false, detail::route_triangle},
      {"degeneracies", 12, 10, true, detail::degeneracies},
      {"fractional-poisson-pmf", 13, 120, false, detail::fractional_poisson_pmf},
  };
  return checks;
}

inline const Check* find_check(const std::string& name) {
  for (const auto& c : registry())
    if (c.name == name) return &c;
  return nullptr;
}

inline CheckReport run_check(const Check& c, const Options& opt) {
  CheckReport r;
  r.name = c.name;
  r.criterion = c.criterion;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.body(r, opt);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace fracwalk::validation
