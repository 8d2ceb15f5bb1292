#pragma once

// Renewal paths, counting numbers, thinning with time rescaling and the
// Laplace-domain machinery of the infinite-thinning limit.

#include "fracwalk/errors.hpp"
#include "fracwalk/laplace_inversion.hpp"
#include "fracwalk/laws.hpp"
#include "fracwalk/rng.hpp"
#include "fracwalk/special_functions.hpp"
#include "fracwalk/variates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace fracwalk {

struct RenewalPath {
  std::vector<double> event_times;  // 0 < t_1 < t_2 < ... <= horizon
  WaitingLaw law;                   // law of the underlying (unthinned) waiting times
  double horizon = 0.0;
  /// Time of the first event after the horizon.
  double overhang = std::numeric_limits<double>::infinity();
  /// Product of keep probabilities and time scales applied so far.
  double kept_fraction = 1.0;
  double time_scale = 1.0;

  std::size_t size() const { return event_times.size(); }

  /// Inter-event times t_k - t_{k-1}, k = 1..n.
  std::vector<double> waiting_times() const {
    std::vector<double> out(event_times.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < event_times.size(); ++i) {
      out[i] = event_times[i] - prev;
      prev = event_times[i];
    }
    return out;
  }
};

struct RenewalOptions {
  std::size_t max_events = 50'000'000;
};

inline RenewalPath simulate_renewal(const WaitingLaw& law, double horizon, RngStream& rng,
                                    const RenewalOptions& opt = {}) {
  detail::require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive and finite");
  RenewalPath path{{}, law, horizon};
  double t = 0.0;
  for (;;) {
    const double w = sample_waiting(law, rng);
    t += w;
    if (t > horizon) break;
    if (w <= 0.0) continue;  // a zero draw would break strict ordering; it cannot occur for these laws
    if (path.event_times.size() >= opt.max_events)
      throw BudgetError("renewal path exceeded " + std::to_string(opt.max_events) + " events");
    path.event_times.push_back(t);
  }
  path.overhang = t;
  return path;
}

/// N(t) = max{k : t_k <= t}, right-continuous.
inline std::size_t counting_number(const RenewalPath& path, double t) {
  detail::require(t >= 0.0, "time must be nonnegative");
  if (t > path.horizon) throw RangeError("time lies beyond the observed horizon");
  return static_cast<std::size_t>(std::upper_bound(path.event_times.begin(), path.event_times.end(), t) -
                                  path.event_times.begin());
}

struct ThinningConfig {
  enum class Relation { free, scaled };

  double q = 1.0;
  double tau = 1.0;
  Relation relation = Relation::free;

  /// q = lambda tau^beta, the scaling relation of the infinite-thinning limit.
  static ThinningConfig scaled(const WaitingLaw& law, double tau) {
    detail::require(tau > 0.0, "time scale must be positive");
    ThinningConfig c{law.lambda_scale() * std::pow(tau, law.beta()), tau, Relation::scaled};
    c.validate();
    return c;
  }

  void validate() const {
    detail::require(q > 0.0 && q <= 1.0, "keep probability must lie in (0, 1]");
    detail::require(tau > 0.0 && std::isfinite(tau), "time scale must be positive");
  }
};

/// Keeps every event independently with probability q and multiplies the surviving times by tau.
/// The new overhang is found by continuing the underlying process past the horizon.
inline RenewalPath thin_path(const RenewalPath& path, const ThinningConfig& cfg, RngStream& rng,
                             const RenewalOptions& opt = {}) {
  cfg.validate();
  RenewalPath out{{}, path.law, path.horizon * cfg.tau};
  out.kept_fraction = path.kept_fraction * cfg.q;
  out.time_scale = path.time_scale * cfg.tau;
  out.event_times.reserve(static_cast<std::size_t>(cfg.q * static_cast<double>(path.size())) + 16);
  const auto keep = [&] { return cfg.q >= 1.0 || rng.uniform() < cfg.q; };
  for (double t : path.event_times)
    if (keep()) out.event_times.push_back(t * cfg.tau);
  if (std::isfinite(path.overhang)) {
    double t = path.overhang;
    std::size_t extra = 0;
    while (!keep()) {
      // next event of the input process: underlying waits until one survives its earlier thinnings
      double w = 0.0;
      do {
        w += sample_waiting(path.law, rng);
        if (++extra > opt.max_events) throw BudgetError("overhang search exceeded the event budget");
      } while (path.kept_fraction < 1.0 && rng.uniform() >= path.kept_fraction);
      t += w * path.time_scale;
    }
    out.overhang = t * cfg.tau;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Laplace domain

/// g~(s) = q f~(tau s) / (1 - (1-q) f~(tau s)), written through m = 1 - f~ for accuracy.
inline double thinned_laplace(const WaitingLaw& law, double q, double tau, double s) {
  detail::require(q > 0.0 && q <= 1.0, "keep probability must lie in (0, 1]");
  detail::require(tau > 0.0, "time scale must be positive");
  detail::require(s >= 0.0, "Laplace variable must be >= 0");
  const double m = law.one_minus_laplace(tau * s);
  return q * (1.0 - m) / (q + m * (1.0 - q));
}

/// Same map applied to an arbitrary transform value f~(tau s).
inline std::complex<double> thinned_transform(std::complex<double> f, double q) {
  return q * f / (1.0 - (1.0 - q) * f);
}

struct ThinningLimitRow {
  double tau = 0.0;
  double q = 0.0;
  std::vector<double> deviation;  // |g~(s) - 1/(1+s^beta)| per s
  double sup_deviation = 0.0;
};

inline std::vector<ThinningLimitRow> thinning_limit_curve(const WaitingLaw& law, std::span<const double> s_grid,
                                                          std::span<const double> tau_seq) {
  detail::require(!s_grid.empty() && !tau_seq.empty(), "grids must be nonempty");
  for (std::size_t i = 1; i < tau_seq.size(); ++i)
    detail::require(tau_seq[i] < tau_seq[i - 1], "time scales must be decreasing");
  std::vector<ThinningLimitRow> rows;
  for (double tau : tau_seq) {
    const auto cfg = ThinningConfig::scaled(law, tau);
    ThinningLimitRow row{tau, cfg.q, {}, 0.0};
    for (double s : s_grid) {
      const double limit = 1.0 / (1.0 + std::pow(s, law.beta()));
      const double d = std::abs(thinned_laplace(law, cfg.q, tau, s) - limit);
      row.deviation.push_back(d);
      row.sup_deviation = std::max(row.sup_deviation, d);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Counting distribution of the Mittag-Leffler renewal process

/// P(N(t) = k) = v_k(t), the inverse Laplace transform of s^(beta-1) / (1+s^beta)^(k+1).
inline double counting_pmf(double beta, double t, int k, const TalbotOptions& opt = {}) {
  detail::require(beta > 0.0 && beta <= 1.0, "exponent must lie in (0, 1]");
  detail::require(t > 0.0, "time must be positive");
  detail::require(k >= 0, "count must be nonnegative");
  if (beta == 1.0) return std::exp(k * std::log(t) - t - detail::log_gamma(k + 1.0));
  const auto transform = [=](std::complex<double> s) {
    const std::complex<double> sb = std::pow(s, beta);
    return sb / s * std::pow(1.0 + sb, -(k + 1.0));
  };
  return std::max(0.0, talbot_invert(transform, t, opt).value);
}

/// pmf table for k = 0, 1, ... until the remaining mass is below tail_mass.
inline std::vector<double> counting_pmf_table(double beta, double t, double tail_mass = 1e-9,
                                              const TalbotOptions& opt = {}) {
  std::vector<double> p;
  double total = 0.0;
  for (int k = 0; k < 100000; ++k) {
    p.push_back(counting_pmf(beta, t, k, opt));
    total += p.back();
    if (1.0 - total < tail_mass && k > 0 && p.back() < p[p.size() - 2]) return p;
  }
  throw TruncationError("counting pmf did not reach the requested mass");
}

/// Renewal function E N(t) = t^beta / Gamma(1+beta) of the Mittag-Leffler process.
inline double ml_renewal_function(double beta, double t) {
  detail::require(beta > 0.0 && beta <= 1.0, "exponent must lie in (0, 1]");
  detail::require(t >= 0.0, "time must be nonnegative");
  return std::pow(t, beta) / std::tgamma(1.0 + beta);
}

}  // namespace fracwalk
