#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace fracwalk::detail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// ln|Gamma(x)|; thread-safe, unlike std::lgamma which writes signgam.
inline double log_gamma(double x) {
  int sign = 0;
  return boost::math::lgamma(x, &sign);
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

/// 1/Gamma(x), entire: zero at the poles, reflection for negative x.
inline double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 0.0) {
    if (x < 170.0) return 1.0 / std::tgamma(x);
    return std::exp(-log_gamma(x));
  }
  // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
  const double s = std::sin(kPi * x) / kPi;
  if (1.0 - x < 170.0) return s * std::tgamma(1.0 - x);
  return s * std::exp(log_gamma(1.0 - x));
}

/// 1/Gamma(x) times exp(log_scale), without overflowing the intermediate 1/Gamma(x).
inline double scaled_rgamma(double x, double log_scale) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 0.0) return std::exp(log_scale - log_gamma(x));
  const double s = std::sin(kPi * x) / kPi;
  return (s < 0.0 ? -1.0 : 1.0) * std::exp(log_scale + std::log(std::abs(s)) + log_gamma(1.0 - x));
}

/// sin(pi (1 - beta m)) with the argument reduced exactly modulo 2, so large m
/// does not cost absolute accuracy.
inline double sinpi_one_minus(double beta, double m) {
  const double hi = beta * m;
  const double lo = std::fma(beta, m, -hi);
  const double r = std::fmod(hi, 2.0);
  return std::sin(kPi * ((1.0 - r) - lo));
}

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    const T t = sum_ + v;
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
      else
        comp_ += (v - t) + sum_;
    } else {
      // componentwise for complex
      comp_ += T(fix(sum_.real(), v.real(), t.real()), fix(sum_.imag(), v.imag(), t.imag()));
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double fix(double s, double v, double t) {
    return std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
  }
  T sum_{};
  T comp_{};
};

}  // namespace fracwalk::detail
