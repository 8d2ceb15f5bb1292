#pragma once

// Mittag-Leffler family, M-Wright function and the stable densities built on
// them. All evaluators are pure and safe to call concurrently.
//
// Routing for E_{a,b}(z):
//   * a == b == 1                  -> exp(z)
//   * real z < 0, 0 < a < 1, b in {1, a}:
//       peak series term <= 1e4    -> Taylor series in double
//       |z| >= z_asymptotic, or |z| >= 10 with the expansion converged
//                                  -> inverse power expansion
//       otherwise                  -> spectral (Laplace) integral
//   * everything else: Taylor series (double, or MPFR when the terms cancel)
//     while w = |z|^(1/a) <= 50, the exponential/algebraic asymptotic beyond.

#include "fracwalk/detail/bigfloat.hpp"
#include "fracwalk/detail/numeric.hpp"
#include "fracwalk/errors.hpp"
#include "fracwalk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace fracwalk {

enum class Method { series, integral, asymptotic };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::series:
      return "series";
    case Method::integral:
      return "integral";
    case Method::asymptotic:
      return "asymptotic";
  }
  return "?";
}

template <class T>
struct EvalResult {
  T value{};
  double abs_error_bound = 0.0;
  Method method_used = Method::series;
};

struct MlParams {
  double alpha = 1.0;
  double beta_second = 1.0;

  void validate() const {
    detail::require(alpha > 0.0 && std::isfinite(alpha), "Mittag-Leffler order must be > 0");
    detail::require(beta_second > 0.0 && std::isfinite(beta_second),
                    "Mittag-Leffler second parameter must be > 0");
  }
};

struct MlOptions {
  double z_max_negative_real = 700.0;
  double z_max = 50.0;
  double z_asymptotic = 1e5;
  /// Floor for the MPFR fallback precision, in decimal digits.
  unsigned min_digits = 50;
  unsigned max_digits = 6000;
  /// Largest series term tolerated in plain double arithmetic.
  double max_double_peak = 1e4;
  std::optional<Method> force;
};

/// Options that lift the |z| caps; used where the argument is -t^beta.
inline MlOptions unbounded_ml_options() {
  MlOptions o;
  o.z_max_negative_real = detail::kInf;
  return o;
}

namespace detail {

using cd = std::complex<double>;

/// log10 of the largest term |z|^n / Gamma(b + a n) and the index where it sits.
inline std::pair<double, long> ml_series_peak(double a, double b, double r) {
  if (r == 0.0) return {-log_gamma(b) / std::log(10.0), 0};
  // The log-term n ln r - lgamma(b + a n) is concave in n with its maximum
  // near b + a n = w; search a small window around that estimate.
  const double lr = std::log(r);
  const double w = std::pow(r, 1.0 / a);
  const auto term = [&](long n) { return n * lr - log_gamma(b + a * n); };
  const long centre = std::max(0L, static_cast<long>((w - b) / a));
  const long span = 4 + static_cast<long>(2.0 / a);
  double best = term(0);
  long best_n = 0;
  for (long n = std::max(0L, centre - span); n <= centre + span; ++n) {
    const double l = term(n);
    if (l > best) {
      best = l;
      best_n = n;
    }
  }
  return {best / std::log(10.0), best_n};
}

inline EvalResult<cd> ml_series_double(double a, double b, cd z, long n_peak, double peak) {
  const double r = std::abs(z);
  const double th = std::arg(z);
  const bool real_axis = z.imag() == 0.0;
  CompensatedSum<cd> sum;
  double last = 0.0;
  long n = 0;
  for (;; ++n) {
    double mag;
    if (n == 0)
      mag = rgamma(b);
    else if (r == 0.0)
      break;
    else if (b + a * n < 170.0 && n * std::log(r) < 700.0)
      mag = std::pow(r, static_cast<double>(n)) * rgamma(b + a * n);
    else
      mag = std::exp(n * std::log(r) - log_gamma(b + a * n));
    cd term;
    if (real_axis)
      term = (z.real() < 0.0 && (n & 1)) ? -mag : mag;
    else
      term = std::polar(mag, n * th);
    sum.add(term);
    last = mag;
    if (n > n_peak && mag <= 1e-18 * std::max(std::abs(sum.value()), 1e-300)) break;
    if (n > 2000000) throw ConvergenceError("Mittag-Leffler series did not terminate");
  }
  const double bound = peak * kEps * (std::sqrt(static_cast<double>(n + 1)) + 4.0) + last;
  return {sum.value(), bound, Method::series};
}

inline EvalResult<cd> ml_series_extended(double a, double b, cd z, long n_peak, double peak_log10,
                                         unsigned digits) {
  const mpfr_prec_t bits = digits_to_bits(digits);
  const BigFloat zr(bits, z.real());
  const BigFloat zi(bits, z.imag());
  const BigFloat A(bits, a);
  BigFloat pr(bits, 1.0);  // Re z^n
  BigFloat pi(bits, 0.0);  // Im z^n
  BigFloat sr(bits, 0.0);
  BigFloat si(bits, 0.0);
  BigFloat arg(bits, b);
  double last = 0.0;
  long n = 0;
  for (;; ++n) {
    if (n > 0) {
      // z^n = z^(n-1) * z
      BigFloat nr = pr * zr;
      BigFloat tmp = pi * zi;
      nr -= tmp;
      BigFloat ni = pr * zi;
      tmp = pi * zr;
      ni += tmp;
      pr = std::move(nr);
      pi = std::move(ni);
      arg += A;
    }
    const BigFloat g = BigFloat::gamma(arg);
    BigFloat tr = pr / g;
    BigFloat ti = pi / g;
    sr += tr;
    si += ti;
    // compare binary exponents; terms near the peak overflow a double
    const long term_exp = std::max(tr.exponent2(), ti.exponent2());
    const long sum_exp = std::max({sr.exponent2(), si.exponent2(), -1100L});
    last = std::hypot(tr.to_double(), ti.to_double());
    if (n > n_peak && term_exp < sum_exp - 75) break;
    if (n > 2000000) throw ConvergenceError("Mittag-Leffler series did not terminate");
  }
  const double bound = std::pow(10.0, peak_log10 - static_cast<double>(digits) + 1.0) + last;
  return {{sr.to_double(), si.to_double()}, bound, Method::series};
}

inline EvalResult<cd> ml_series(double a, double b, cd z, const MlOptions& opt) {
  const auto [peak_log10, n_peak] = ml_series_peak(a, b, std::abs(z));
  const double peak = std::pow(10.0, peak_log10);
  if (peak <= opt.max_double_peak) return ml_series_double(a, b, z, n_peak, peak);
  const double needed = std::max(0.0, peak_log10) + 22.0;
  const auto digits = static_cast<unsigned>(std::max<double>(opt.min_digits, std::ceil(needed)));
  if (digits > opt.max_digits)
    throw ConvergenceError("Mittag-Leffler series needs " + std::to_string(digits) +
                           " digits, above the configured maximum");
  return ml_series_extended(a, b, z, n_peak, peak_log10, digits);
}

/// E_{a,b}(z) ~ (1/a) sum_m Z_m^(1-b) exp(Z_m) - sum_k z^-k / Gamma(b - a k)
/// with Z_m = |z|^(1/a) exp(i (arg z + 2 pi m) / a) over |arg z + 2 pi m| <= a pi.
inline EvalResult<cd> ml_asymptotic(double a, double b, cd z) {
  const double r = std::abs(z);
  const double th = std::arg(z);
  const double w = std::pow(r, 1.0 / a);
  cd exp_part{0.0, 0.0};
  const long m_lo = static_cast<long>(std::ceil((-a * kPi - th) / (2.0 * kPi)));
  const long m_hi = static_cast<long>(std::floor((a * kPi - th) / (2.0 * kPi)));
  for (long m = m_lo; m <= m_hi; ++m) {
    const double phi = (th + 2.0 * kPi * m) / a;
    const cd Z = std::polar(w, phi);
    if (Z.real() > 700.0) throw OverflowError("Mittag-Leffler value exceeds double range");
    exp_part += std::polar(std::pow(w, 1.0 - b), (1.0 - b) * phi) * std::exp(Z) / a;
  }
  CompensatedSum<cd> alg;
  double prev = kInf;
  double omitted = 0.0;
  const double log_r = std::log(r);
  for (int k = 1; k < 400; ++k) {
    // z^-k / Gamma(b - a k) with the magnitude formed in log space
    const double g = scaled_rgamma(b - a * k, -k * log_r);
    const cd term = std::polar(1.0, -k * th) * g;
    const double mag = std::abs(term);
    if (g != 0.0 && mag > prev) {  // the expansion has started to diverge
      omitted = mag;
      break;
    }
    alg.add(term);
    if (g != 0.0) prev = mag;
    if (g != 0.0 && mag <= 1e-18 * std::abs(alg.value())) {
      omitted = mag;
      break;
    }
  }
  const cd value = exp_part - alg.value();
  return {value, omitted + 4.0 * kEps * std::abs(value), Method::asymptotic};
}

/// Spectral (Laplace) representation on the negative real axis, 0 < a < 1:
///   E_a(-t^a)            = int_0^inf K_a(r) exp(-r t) dr
///   t^(a-1) E_{a,a}(-t^a) = (1/pi) int_0^inf r^a sin(a pi) / (r^2a + 2 r^a cos(a pi) + 1) exp(-r t) dr
/// integrated in u = r t with a breakpoint at the peak of the weight.
inline EvalResult<double> ml_negative_integral(double a, bool second_is_alpha, double x) {
  const double t = std::pow(x, 1.0 / a);
  const double s = std::sin(a * kPi) / kPi;
  const double c = std::cos(a * kPi);
  const auto integrand = [=](double u) {
    if (u <= 0.0) return 0.0;
    const double r = u / t;
    const double ra = std::pow(r, a);
    const double den = ra * ra + 2.0 * ra * c + 1.0;
    const double weight = second_is_alpha ? s * ra / den : s * (ra / r) / den;
    return weight * std::exp(-u) / t;
  };
  const double r_peak = c < 0.0 ? std::pow(-c, 1.0 / a) : 1.0;
  std::vector<double> breaks{0.0};
  if (r_peak * t < 700.0) breaks.push_back(r_peak * t);
  breaks.push_back(kInf);
  const quad::Result q = quad::piecewise(integrand, breaks, 1e-14);
  double value = q.value;
  double err = q.error;
  if (second_is_alpha) {
    const double scale = std::pow(t, 1.0 - a);
    value *= scale;
    err *= scale;
  }
  return {value, err + 4.0 * kEps * std::abs(value), Method::integral};
}

inline bool has_spectral_route(double a, double b) { return a < 1.0 && (b == 1.0 || b == a); }

}  // namespace detail

/// Two-parameter Mittag-Leffler function E_{alpha,beta2}(z).
inline EvalResult<std::complex<double>> ml_two(double alpha, double beta2, std::complex<double> z,
                                               const MlOptions& opt = {}) {
  MlParams{alpha, beta2}.validate();
  detail::require(std::isfinite(z.real()) && std::isfinite(z.imag()), "argument must be finite");
  const bool negative_real = z.imag() == 0.0 && z.real() < 0.0;
  const double r = std::abs(z);
  if (negative_real ? r > opt.z_max_negative_real : r > opt.z_max)
    throw DomainError("|z| = " + std::to_string(r) + " exceeds the configured evaluation radius");

  if (opt.force) {
    switch (*opt.force) {
      case Method::series:
        return detail::ml_series(alpha, beta2, z, opt);
      case Method::asymptotic:
        return detail::ml_asymptotic(alpha, beta2, z);
      case Method::integral: {
        detail::require(negative_real && detail::has_spectral_route(alpha, beta2),
                        "integral route needs z < 0, 0 < alpha < 1 and beta2 in {1, alpha}");
        const auto v = detail::ml_negative_integral(alpha, beta2 != 1.0, -z.real());
        return {v.value, v.abs_error_bound, v.method_used};
      }
    }
  }

  if (alpha == 1.0 && beta2 == 1.0) {
    if (z.real() > 709.0) throw OverflowError("exp(z) exceeds double range");
    const auto v = std::exp(z);
    return {v, 2.0 * detail::kEps * std::abs(v), Method::series};
  }
  if (r == 0.0) return {detail::rgamma(beta2), 0.0, Method::series};

  if (negative_real && detail::has_spectral_route(alpha, beta2)) {
    const auto [peak_log10, n_peak] = detail::ml_series_peak(alpha, beta2, r);
    const double peak = std::pow(10.0, peak_log10);
    if (peak <= opt.max_double_peak) return detail::ml_series_double(alpha, beta2, z, n_peak, peak);
    if (r >= opt.z_asymptotic) return detail::ml_asymptotic(alpha, beta2, z);
    if (r >= 10.0) {
      // the algebraic expansion is often already converged well before z_asymptotic
      const auto a = detail::ml_asymptotic(alpha, beta2, z);
      if (a.abs_error_bound <= 1e-14 * std::abs(a.value)) return a;
    }
    const auto v = detail::ml_negative_integral(alpha, beta2 != 1.0, r);
    return {v.value, v.abs_error_bound, v.method_used};
  }

  const double w = std::pow(r, 1.0 / alpha);
  if (w <= 50.0) return detail::ml_series(alpha, beta2, z, opt);
  return detail::ml_asymptotic(alpha, beta2, z);
}

inline EvalResult<double> ml_two(double alpha, double beta2, double z, const MlOptions& opt = {}) {
  const auto v = ml_two(alpha, beta2, std::complex<double>(z, 0.0), opt);
  return {v.value.real(), v.abs_error_bound, v.method_used};
}

/// One-parameter Mittag-Leffler function E_alpha(z) = E_{alpha,1}(z).
inline EvalResult<std::complex<double>> ml_one(double alpha, std::complex<double> z,
                                               const MlOptions& opt = {}) {
  return ml_two(alpha, 1.0, z, opt);
}

inline EvalResult<double> ml_one(double alpha, double z, const MlOptions& opt = {}) {
  return ml_two(alpha, 1.0, z, opt);
}

/// Mittag-Leffler survival probability E_beta(-t^beta), 0 < beta <= 1.
inline double ml_survival(double beta, double t) {
  detail::require(beta > 0.0 && beta <= 1.0, "survival exponent must lie in (0, 1]");
  detail::require(t >= 0.0, "time must be nonnegative");
  if (t == 0.0) return 1.0;
  if (beta == 1.0) return std::exp(-t);
  if (std::isinf(t)) return 0.0;
  return ml_one(beta, -std::pow(t, beta), unbounded_ml_options()).value;
}

/// Mittag-Leffler waiting-time density t^(beta-1) E_{beta,beta}(-t^beta), 0 < beta < 1.
inline double ml_density(double beta, double t) {
  detail::require(beta > 0.0 && beta < 1.0,
                  "density exponent must lie in (0, 1); use the exponential law at beta = 1");
  detail::require(t > 0.0, "time must be positive");
  if (std::isinf(t)) return 0.0;
  return std::pow(t, beta - 1.0) * ml_two(beta, beta, -std::pow(t, beta), unbounded_ml_options()).value;
}

/// Density through the Taylor series of E_{beta,beta}, regardless of cancellation.
inline double ml_density_series(double beta, double t) {
  detail::require(beta > 0.0 && beta < 1.0, "density exponent must lie in (0, 1)");
  detail::require(t > 0.0, "time must be positive");
  MlOptions opt = unbounded_ml_options();
  opt.force = Method::series;
  return std::pow(t, beta - 1.0) * ml_two(beta, beta, -std::pow(t, beta), opt).value;
}

/// Density by direct quadrature of its completely monotone representation
///   (1/pi) int_0^inf r^beta sin(beta pi) / (r^2beta + 2 r^beta cos(beta pi) + 1) exp(-r t) dr.
inline EvalResult<double> ml_density_integral(double beta, double t) {
  detail::require(beta > 0.0 && beta < 1.0, "density exponent must lie in (0, 1)");
  detail::require(t > 0.0, "time must be positive");
  const double s = std::sin(beta * detail::kPi) / detail::kPi;
  const double c = std::cos(beta * detail::kPi);
  const auto f = [=](double r) {
    if (r <= 0.0) return 0.0;
    const double rb = std::pow(r, beta);
    return s * rb / (rb * rb + 2.0 * rb * c + 1.0) * std::exp(-r * t);
  };
  const std::array<double, 3> breaks{0.0, 1.0, detail::kInf};
  const auto q = quad::piecewise(f, breaks, 1e-14);
  return {q.value, q.error, Method::integral};
}

/// Spectral weight K_beta(r) = (1/pi) r^(beta-1) sin(beta pi) / (r^2beta + 2 r^beta cos(beta pi) + 1).
///
/// Normalization: K is a probability density on (0, inf) and
///   phi_beta(t) = int_0^inf r exp(-r t) K_beta(r) dr,   E_beta(-t^beta) = int_0^inf exp(-r t) K_beta(r) dr,
/// so r K_beta(r) is exactly the integrand of the completely monotone
/// representation of the density. K_beta(r) ~ sin(beta pi)/pi r^(-beta-1) as r -> inf.
inline double ml_spectral_weight(double beta, double r) {
  detail::require(beta > 0.0 && beta < 1.0, "spectral weight exponent must lie in (0, 1)");
  detail::require(r > 0.0, "rate must be positive");
  const double rb = std::pow(r, beta);
  return std::sin(beta * detail::kPi) / detail::kPi * (rb / r) /
         (rb * rb + 2.0 * rb * std::cos(beta * detail::kPi) + 1.0);
}

// ---------------------------------------------------------------------------
// M-Wright function

struct MWrightOptions {
  double z_max = 50.0;
  unsigned min_digits = 50;
  unsigned max_digits = 6000;
  double max_double_peak = 1e4;
  /// Use the positive integral form when the series cancels; otherwise MPFR.
  bool allow_integral = true;
};

namespace detail {

/// log of the large-z asymptote a z^((b-1/2)/(1-b)) exp(-c z^(1/(1-b))).
inline double mwright_log_asymptote(double beta, double z) {
  const double nu = 1.0 - beta;
  const double log_a = -0.5 * std::log(2.0 * kPi * nu) + (2.0 * beta - 1.0) / (2.0 * nu) * std::log(beta);
  const double c = nu * std::pow(beta, beta / nu);
  return log_a + (beta - 0.5) / nu * std::log(z) - c * std::pow(z, 1.0 / nu);
}

struct MWrightPlan {
  double peak_log10 = 0.0;
  long n_peak = 0;
  double scale_log10 = 0.0;  // expected log10 magnitude of the result (<= 0)
};

inline MWrightPlan mwright_plan(double beta, double z) {
  MWrightPlan p;
  p.scale_log10 = z > 1.0 ? std::min(0.0, mwright_log_asymptote(beta, z) / std::log(10.0)) : 0.0;
  // |term_n| <= z^n Gamma(beta (n+1)) / (pi n!), concave in n with its peak
  // near n = (z beta^beta)^(1/(1-beta)).
  const double lz = std::log(z);
  const auto term = [&](double n) {
    return n * lz + log_gamma(beta * (n + 1)) - log_gamma(n + 1.0) - std::log(kPi);
  };
  const double centre = std::pow(z * std::pow(beta, beta), 1.0 / (1.0 - beta));
  if (centre > 1e9) {
    p.n_peak = static_cast<long>(std::min(centre, 9e18));
    p.peak_log10 = term(centre) / std::log(10.0);
    return p;
  }
  const long c = static_cast<long>(centre);
  double best = term(0.0);
  for (long n = std::max(0L, c - 8); n <= c + 8; ++n) {
    const double l = term(static_cast<double>(n));
    if (l > best) {
      best = l;
      p.n_peak = n;
    }
  }
  p.peak_log10 = best / std::log(10.0);
  return p;
}

/// Non-oscillatory integral form, positive integrand on (0, pi):
///   M_beta(z) = z^(beta/(1-beta)) / (pi (1-beta)) int_0^pi K(p) exp(-z^(1/(1-beta)) K(p)) dp,
///   K(p) = (sin(beta p)/sin p)^(1/(1-beta)) sin((1-beta) p)/sin(beta p).
/// The minimum K(0+) = (1-beta) beta^(beta/(1-beta)) is factored out of the exponential.
inline EvalResult<double> mwright_integral(double beta, double z) {
  const double nu = 1.0 - beta;
  const double big_z = std::pow(z, 1.0 / nu);
  const double k0 = nu * std::pow(beta, beta / nu);
  const auto kernel = [=](double p) {
    return std::pow(std::sin(beta * p) / std::sin(p), 1.0 / nu) * std::sin(nu * p) / std::sin(beta * p);
  };
  const auto f = [&](double p) {
    const double k = kernel(p);
    if (!std::isfinite(k)) return 0.0;
    const double e = big_z * (k - k0);
    return e > 745.0 ? 0.0 : k * std::exp(-e);
  };
  const quad::Result q = quad::finite(f, 0.0, kPi, 1e-14);
  const double log_pref = beta / nu * std::log(z) - std::log(kPi * nu) - big_z * k0;
  const double pref = std::exp(log_pref);
  return {pref * q.value, pref * q.error + 8.0 * kEps * pref * std::abs(q.value), Method::integral};
}

enum class MWrightForm { gamma_ratio, sine };

inline EvalResult<double> mwright_sum(double beta, double z, const MWrightOptions& opt, MWrightForm form) {
  if (z == 0.0) return {rgamma(1.0 - beta), 0.0, Method::series};
  if (z > 1.0 && mwright_log_asymptote(beta, z) / std::log(10.0) < -310.0)
    return {0.0, 1e-300, Method::asymptotic};  // below the smallest normal double
  const MWrightPlan plan = mwright_plan(beta, z);
  const double cancel = plan.peak_log10 - plan.scale_log10;
  const double stop_log10 = plan.scale_log10 - 19.0;

  if (cancel <= std::log10(opt.max_double_peak)) {
    // Each term carries a relative rounding error of about eps times the size
    // of its log-gamma arguments; that error is accumulated and the double sum
    // is only accepted when it stays small against the result.
    CompensatedSum<double> sum;
    double last = 0.0;
    double rounding = 0.0;
    long n = 0;
    const double lz = std::log(z);
    for (;; ++n) {
      const double m = n + 1.0;
      const double log_pow = n * lz - log_gamma(n + 1.0);
      const double lg = log_gamma(beta * m);
      double term;
      if (form == MWrightForm::gamma_ratio) {
        // (-z)^n / (n! Gamma(1 - beta m)), reflected when 1 - beta m <= 0
        const double x = 1.0 - beta * m;
        term = x > 0.0 ? std::exp(log_pow - log_gamma(x)) : sinpi_one_minus(beta, m) / kPi * std::exp(log_pow + lg);
      } else {
        // (1/pi) (-z)^(m-1)/(m-1)! Gamma(beta m) sin(pi beta m)
        term = sinpi_one_minus(beta, m) * std::exp(log_pow + lg) / kPi;
      }
      if (n & 1) term = -term;
      sum.add(term);
      last = std::abs(term);
      const double envelope = std::exp(log_pow + lg) / kPi;
      rounding += envelope * kEps * (std::abs(log_pow) + std::abs(lg) + 8.0);
      if (n > plan.n_peak && (last == 0.0 ? true : std::log10(last) < stop_log10) &&
          std::log10(envelope) < stop_log10)
        break;
      if (n > 50000000) throw ConvergenceError("M-Wright series did not terminate");
    }
    const double bound = rounding + last;
    const double reference = std::max(std::abs(sum.value()), std::pow(10.0, plan.scale_log10));
    if (bound <= 1e-12 * reference) return {sum.value(), bound, Method::series};
  }

  if (opt.allow_integral) {
    const auto v = mwright_integral(beta, z);
    if (std::isfinite(v.value) && v.abs_error_bound <= 1e-12 * std::abs(v.value)) return v;
  }

  const double needed = cancel + 22.0;
  if (needed > opt.max_digits)
    throw ConvergenceError("M-Wright series needs " + std::to_string(static_cast<long>(needed)) +
                           " digits at z = " + std::to_string(z));
  const auto digits = static_cast<unsigned>(std::max<double>(opt.min_digits, std::ceil(needed)));
  const mpfr_prec_t bits = digits_to_bits(digits);
  const BigFloat Z(bits, z);
  const BigFloat B(bits, beta);
  const BigFloat pi = BigFloat::pi(bits);
  BigFloat power(bits, 1.0);  // z^n / n!
  BigFloat sum(bits, 0.0);
  double last = 0.0;
  long n = 0;
  for (;; ++n) {
    if (n > 0) {
      power *= Z;
      power.div_ui(static_cast<unsigned long>(n));
    }
    BigFloat term(bits);
    if (form == MWrightForm::gamma_ratio) {
      BigFloat x(bits, 1.0);  // 1 - beta (n+1)
      BigFloat bn = B;
      bn *= static_cast<double>(n + 1);
      x -= bn;
      if (x.is_integer() && x.sign() <= 0) {
        term = 0.0;
      } else {
        term = power / BigFloat::gamma(x);
      }
    } else {
      BigFloat bm = B;
      bm *= static_cast<double>(n + 1);
      BigFloat arg = pi * bm;
      term = power * BigFloat::gamma(bm) * BigFloat::sin(arg) / pi;
    }
    if (n & 1) term.negate();
    sum += term;
    last = std::abs(term.to_double());
    const double envelope =
        (n * std::log(z) - log_gamma(n + 1.0) + log_gamma(beta * (n + 1.0))) / std::log(10.0);
    if (n > plan.n_peak && envelope < stop_log10) break;
    if (n > 50000000) throw ConvergenceError("M-Wright series did not terminate");
  }
  const double bound = std::pow(10.0, plan.peak_log10 - digits + 1.0) + last;
  return {sum.to_double(), bound, Method::series};
}

inline void check_mwright_args(double beta, double z, const MWrightOptions& opt) {
  require(beta > 0.0 && beta < 1.0, "M-Wright order must lie in (0, 1)");
  require(z >= 0.0, "M-Wright argument must be nonnegative");
  require(z <= opt.z_max, "M-Wright argument exceeds the configured maximum");
}

}  // namespace detail

/// M_beta(z) = sum_n (-z)^n / (n! Gamma(-beta n + 1 - beta)), z >= 0.
inline EvalResult<double> mwright(double beta, double z, const MWrightOptions& opt = {}) {
  detail::check_mwright_args(beta, z, opt);
  return detail::mwright_sum(beta, z, opt, detail::MWrightForm::gamma_ratio);
}

/// Same function through (1/pi) sum_n (-z)^(n-1)/(n-1)! Gamma(beta n) sin(pi beta n).
inline EvalResult<double> mwright_sine_series(double beta, double z, const MWrightOptions& opt = {}) {
  detail::check_mwright_args(beta, z, opt);
  return detail::mwright_sum(beta, z, opt, detail::MWrightForm::sine);
}

inline MWrightOptions unbounded_mwright_options() {
  MWrightOptions o;
  o.z_max = detail::kInf;
  return o;
}

/// Extremal one-sided stable density with Laplace transform exp(-s^beta):
///   L(t) = beta t^(-1-beta) M_beta(t^(-beta)).
inline double one_sided_stable_density(double beta, double t) {
  detail::require(beta > 0.0 && beta < 1.0, "stable order must lie in (0, 1)");
  detail::require(t > 0.0, "time must be positive");
  if (std::isinf(t)) return 0.0;
  const double z = std::pow(t, -beta);
  const double m = mwright(beta, z, unbounded_mwright_options()).value;
  return m == 0.0 ? 0.0 : beta * std::pow(t, -1.0 - beta) * m;
}

// ---------------------------------------------------------------------------
// Symmetric stable density with Fourier transform exp(-r |k|^alpha)

namespace detail {

/// Standard density g(y) = (1/pi) int_0^inf cos(k y) exp(-k^alpha) dk by
/// Gauss-Kronrod panels between the zeros of cos(k y).
inline quad::Result stable_cosine_quadrature(double alpha, double y) {
  const double k_max = std::pow(42.0, 1.0 / alpha);
  const auto f = [=](double k) { return std::cos(k * y) * std::exp(-std::pow(k, alpha)); };
  quad::Result total;
  if (y * k_max > 200.0 * kPi) {
    // many oscillations: double-exponential Fourier rule
    total = quad::cosine_transform([=](double k) { return std::exp(-std::pow(k, alpha)); }, y);
  } else if (y * k_max <= kPi / 2.0) {
    total += quad::finite(f, 0.0, k_max, 1e-13);
  } else {
    double lo = 0.0;
    for (long j = 0;; ++j) {
      const double hi = std::min(k_max, (j + 0.5) * kPi / y);
      total += (j == 0 ? quad::finite(f, lo, hi, 1e-13) : quad::gauss_kronrod(f, lo, hi, 1e-13, 8));
      lo = hi;
      if (hi >= k_max) break;
    }
  }
  total.value /= kPi;
  total.error /= kPi;
  return total;
}

/// Large-y expansion (1/pi) sum_k (-1)^(k+1) Gamma(alpha k + 1)/k! sin(k pi alpha/2) y^(-alpha k - 1);
/// convergent for alpha < 1, asymptotic for alpha > 1.
inline std::optional<double> stable_tail_series(double alpha, double y) {
  CompensatedSum<double> sum;
  double prev = kInf;
  double max_term = 0.0;
  const double ly = std::log(y);
  for (int k = 1; k < 2000; ++k) {
    const double mag = std::exp(log_gamma(alpha * k + 1.0) - log_gamma(k + 1.0) - (alpha * k + 1.0) * ly);
    const double s = std::sin(k * kPi * alpha / 2.0);
    if (alpha > 1.0 && mag > prev) return std::nullopt;
    prev = mag;
    const double term = ((k & 1) ? 1.0 : -1.0) * mag * s / kPi;
    sum.add(term);
    max_term = std::max(max_term, std::abs(term));
    if (mag / kPi < 1e-17 * std::abs(sum.value())) {
      if (max_term > 1e3 * std::abs(sum.value())) return std::nullopt;
      return sum.value();
    }
  }
  return std::nullopt;
}

/// Small-y series (1/(pi alpha)) sum_k (-1)^k Gamma((2k+1)/alpha)/(2k)! y^(2k), entire for alpha > 1.
inline std::optional<double> stable_core_series(double alpha, double y) {
  CompensatedSum<double> sum;
  double max_term = 0.0;
  const double ly = y > 0.0 ? std::log(y) : -kInf;
  for (int k = 0; k < 2000; ++k) {
    const double lg = log_gamma((2.0 * k + 1.0) / alpha) - log_gamma(2.0 * k + 1.0);
    const double mag = k == 0 ? std::exp(lg) : std::exp(lg + 2.0 * k * ly);
    const double term = ((k & 1) ? -1.0 : 1.0) * mag / (kPi * alpha);
    sum.add(term);
    max_term = std::max(max_term, std::abs(term));
    if (k > 2 && std::abs(term) < 1e-17 * std::abs(sum.value())) {
      if (max_term > 1e3 * std::abs(sum.value())) return std::nullopt;
      return sum.value();
    }
  }
  return std::nullopt;
}

inline double stable_standard_density(double alpha, double y) {
  y = std::abs(y);
  if (alpha == 2.0) return std::exp(-y * y / 4.0) / std::sqrt(4.0 * kPi);
  if (alpha == 1.0) return 1.0 / (kPi * (1.0 + y * y));
  if (y == 0.0) return std::tgamma(1.0 + 1.0 / alpha) / kPi;
  if (alpha > 1.0 && y < 4.0) {
    if (auto v = stable_core_series(alpha, y)) return *v;
  }
  if (y > (alpha < 1.0 ? 2.0 : 6.0)) {
    if (auto v = stable_tail_series(alpha, y)) return *v;
  }
  const quad::Result q = stable_cosine_quadrature(alpha, y);
  return std::max(0.0, q.value);
}

}  // namespace detail

/// Symmetric stable density f_alpha(x, r) whose Fourier transform is exp(-r |k|^alpha).
/// Closed forms at alpha = 2 (Gaussian, variance 2r) and alpha = 1 (Cauchy, scale r).
inline double symmetric_stable_density(double alpha, double x, double r) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "stable index must lie in (0, 2]");
  detail::require(r > 0.0, "scale must be positive");
  if (alpha == 2.0) return std::exp(-x * x / (4.0 * r)) / std::sqrt(4.0 * detail::kPi * r);
  if (alpha == 1.0) return (r / detail::kPi) / (x * x + r * r);
  const double scale = std::pow(r, 1.0 / alpha);
  const double y = x / scale;
  // far tail at vanishing scale: f ~ r b |x|^(-1-alpha)
  if (!std::isfinite(y) || scale == 0.0)
    return r * std::tgamma(alpha + 1.0) * std::sin(alpha * detail::kPi / 2.0) / detail::kPi *
           std::pow(std::abs(x), -1.0 - alpha);
  return detail::stable_standard_density(alpha, y) / scale;
}

/// Same density by direct cosine-transform quadrature, for cross-checks.
inline double symmetric_stable_density_quadrature(double alpha, double x, double r) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "stable index must lie in (0, 2]");
  detail::require(r > 0.0, "scale must be positive");
  const double scale = std::pow(r, 1.0 / alpha);
  return detail::stable_cosine_quadrature(alpha, std::abs(x) / scale).value / scale;
}

}  // namespace fracwalk
