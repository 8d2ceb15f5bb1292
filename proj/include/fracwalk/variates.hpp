#pragma once

// Samplers for the waiting, jump and stable laws. Every sampler consumes a
// fixed pattern of uniforms from the stream it is handed.

#include "fracwalk/detail/numeric.hpp"
#include "fracwalk/errors.hpp"
#include "fracwalk/laws.hpp"
#include "fracwalk/rng.hpp"
#include "fracwalk/special_functions.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

namespace fracwalk {

/// Mittag-Leffler waiting time by the transformation
///   T = -ln U [sin(beta pi)/tan(beta pi V) - cos(beta pi)]^(1/beta).
inline double sample_mittag_leffler(double beta, RngStream& rng) {
  detail::require(beta > 0.0 && beta <= 1.0, "Mittag-Leffler exponent must lie in (0, 1]");
  const double u = rng.uniform();
  const double v = rng.uniform();
  if (beta == 1.0) return -std::log(u);
  const double bp = beta * detail::kPi;
  const double w = std::sin(bp) / std::tan(bp * v) - std::cos(bp);
  return -std::log(u) * std::pow(w, 1.0 / beta);
}

/// Solves E_beta(-t^beta) = u for t by bracketed root finding in log t.
inline double ml_survival_inverse(double beta, double u) {
  detail::require(beta > 0.0 && beta <= 1.0, "Mittag-Leffler exponent must lie in (0, 1]");
  detail::require(u > 0.0 && u < 1.0, "probability must lie in (0, 1)");
  if (beta == 1.0) return -std::log(u);
  // initial guesses from t^beta / Gamma(1+beta) near 0 and t^-beta / Gamma(1-beta) at infinity
  const double small = std::pow((1.0 - u) * std::tgamma(1.0 + beta), 1.0 / beta);
  const double large = std::pow(u * std::tgamma(1.0 - beta), -1.0 / beta);
  const auto f = [&](double x) { return ml_survival(beta, std::exp(x)) - u; };
  double lo = std::log(std::min(small, large)) - 1.0;
  double hi = std::log(std::max(small, large)) + 1.0;
  while (f(lo) < 0.0) lo -= 2.0;
  while (f(hi) > 0.0) hi += 2.0;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(48), iters);
  return std::exp(0.5 * (r.first + r.second));
}

/// Mittag-Leffler waiting time by inversion of the survival function; slow, used as an oracle.
inline double sample_mittag_leffler_inversion(double beta, RngStream& rng) {
  return ml_survival_inverse(beta, rng.uniform());
}

/// Extremal one-sided stable variable with E exp(-s S) = exp(-s^beta), Kanter's representation:
///   S = [sin(beta V) / sin(V)^(1/beta)] [sin((1-beta) V) / W]^((1-beta)/beta),  V ~ U(0, pi), W ~ Exp(1).
inline double sample_one_sided_stable(double beta, RngStream& rng) {
  detail::require(beta > 0.0 && beta < 1.0, "stable order must lie in (0, 1)");
  const double v = detail::kPi * rng.uniform();
  const double w = rng.exponential();
  const double a = std::sin(beta * v) / std::pow(std::sin(v), 1.0 / beta);
  return a * std::pow(std::sin((1.0 - beta) * v) / w, (1.0 - beta) / beta);
}

/// Symmetric stable variable with E exp(i k X) = exp(-|k|^alpha) (Chambers-Mallows-Stuck).
inline double sample_sym_stable(double alpha, RngStream& rng) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "stable index must lie in (0, 2]");
  if (alpha == 2.0) return std::sqrt(2.0) * rng.normal();
  const double v = detail::kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

inline double sample_waiting(const WaitingLaw& law, RngStream& rng) {
  switch (law.kind()) {
    case WaitingLaw::Kind::exponential:
      return rng.exponential() / law.rate();
    case WaitingLaw::Kind::mittag_leffler:
      return sample_mittag_leffler(law.beta(), rng);
    case WaitingLaw::Kind::pareto:
      // survival (1 + t/theta)^-beta = U
      return law.theta() * std::expm1(-std::log(rng.uniform()) / law.beta());
  }
  return 0.0;
}

inline double sample_jump(const JumpLaw& law, RngStream& rng) {
  switch (law.kind()) {
    case JumpLaw::Kind::two_point:
      return rng.sign();
    case JumpLaw::Kind::gaussian:
      return std::sqrt(law.sigma2()) * rng.normal();
    case JumpLaw::Kind::sym_pareto: {
      const double s = rng.sign();
      return s * law.theta() * std::pow(rng.uniform(), -1.0 / law.alpha());
    }
    case JumpLaw::Kind::sym_stable:
      return sample_sym_stable(law.alpha(), rng);
    case JumpLaw::Kind::unit_drift:
      return 1.0;
  }
  return 0.0;
}

}  // namespace fracwalk
