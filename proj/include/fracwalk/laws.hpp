#pragma once

// Waiting-time and jump laws with their transforms and the scale constants of
// the power-law limit theorems:
//   waiting: 1 - phi~(s) ~ lambda s^beta   (s -> 0)
//   jumps:   1 - w^(k)  ~ mu |k|^alpha     (k -> 0)

#include "fracwalk/detail/numeric.hpp"
#include "fracwalk/errors.hpp"
#include "fracwalk/quadrature.hpp"
#include "fracwalk/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>
#include <string>

namespace fracwalk {

struct StabilityParams {
  double alpha = 2.0;
  double beta = 1.0;

  enum class Regime { normal, time_fractional, space_fractional, space_time_fractional };

  void validate() const {
    detail::require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
    detail::require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  }

  Regime regime() const {
    validate();
    if (alpha == 2.0) return beta == 1.0 ? Regime::normal : Regime::time_fractional;
    return beta == 1.0 ? Regime::space_fractional : Regime::space_time_fractional;
  }
};

inline const char* to_string(StabilityParams::Regime r) {
  switch (r) {
    case StabilityParams::Regime::normal:
      return "normal";
    case StabilityParams::Regime::time_fractional:
      return "time-fractional";
    case StabilityParams::Regime::space_fractional:
      return "space-fractional";
    case StabilityParams::Regime::space_time_fractional:
      return "space-time-fractional";
  }
  return "?";
}

// ---------------------------------------------------------------------------

class WaitingLaw {
 public:
  enum class Kind { exponential, mittag_leffler, pareto };

  /// Exponential with rate m (mean 1/m).
  static WaitingLaw exponential(double rate) {
    detail::require(rate > 0.0 && std::isfinite(rate), "exponential rate must be > 0");
    WaitingLaw w;
    w.kind_ = Kind::exponential;
    w.beta_ = 1.0;
    w.rate_ = rate;
    w.lambda_ = 1.0 / rate;
    return w;
  }

  /// Survival E_beta(-t^beta), Laplace transform 1/(1+s^beta).
  static WaitingLaw mittag_leffler(double beta) {
    detail::require(beta > 0.0 && beta <= 1.0, "Mittag-Leffler exponent must lie in (0, 1]");
    WaitingLaw w;
    w.kind_ = Kind::mittag_leffler;
    w.beta_ = beta;
    w.lambda_ = 1.0;
    w.tail_c_ = beta < 1.0 ? std::tgamma(beta + 1.0) * std::sin(beta * detail::kPi) / detail::kPi : 0.0;
    return w;
  }

  /// Lomax form: survival (1 + t/theta)^(-beta), 0 < beta < 1.
  static WaitingLaw pareto(double beta, double theta) {
    detail::require(beta > 0.0 && beta < 1.0, "Pareto waiting exponent must lie in (0, 1)");
    detail::require(theta > 0.0 && std::isfinite(theta), "Pareto scale must be > 0");
    WaitingLaw w;
    w.kind_ = Kind::pareto;
    w.beta_ = beta;
    w.theta_ = theta;
    w.tail_c_ = beta * std::pow(theta, beta);
    w.lambda_ = w.tail_c_ * detail::kPi / (std::tgamma(beta + 1.0) * std::sin(beta * detail::kPi));
    return w;
  }

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  double rate() const { return rate_; }
  double theta() const { return theta_; }
  /// lambda: mean for a finite-mean law, c pi / (Gamma(beta+1) sin(beta pi)) for a power tail.
  double lambda_scale() const { return lambda_; }
  /// c in Psi(t) ~ (c/beta) t^-beta; zero for finite-mean laws.
  double tail_c() const { return tail_c_; }
  bool finite_mean() const { return beta_ == 1.0; }

  std::string describe() const {
    switch (kind_) {
      case Kind::exponential:
        return "exponential(rate=" + num(rate_) + ")";
      case Kind::mittag_leffler:
        return "mittag_leffler(beta=" + num(beta_) + ")";
      case Kind::pareto:
        return "pareto(beta=" + num(beta_) + ",theta=" + num(theta_) + ")";
    }
    return "?";
  }

  double survival(double t) const {
    if (t <= 0.0) return 1.0;
    switch (kind_) {
      case Kind::exponential:
        return std::exp(-rate_ * t);
      case Kind::mittag_leffler:
        return ml_survival(beta_, t);
      case Kind::pareto:
        return std::pow(1.0 + t / theta_, -beta_);
    }
    return 0.0;
  }

  double cdf(double t) const {
    if (t <= 0.0) return 0.0;
    switch (kind_) {
      case Kind::exponential:
        return -std::expm1(-rate_ * t);
      case Kind::mittag_leffler:
        return beta_ == 1.0 ? -std::expm1(-t) : 1.0 - ml_survival(beta_, t);
      case Kind::pareto:
        return -std::expm1(-beta_ * std::log1p(t / theta_));
    }
    return 1.0;
  }

  double density(double t) const {
    detail::require(t > 0.0, "density needs t > 0");
    switch (kind_) {
      case Kind::exponential:
        return rate_ * std::exp(-rate_ * t);
      case Kind::mittag_leffler:
        return beta_ == 1.0 ? std::exp(-t) : ml_density(beta_, t);
      case Kind::pareto:
        return beta_ / theta_ * std::pow(1.0 + t / theta_, -beta_ - 1.0);
    }
    return 0.0;
  }

  /// phi~(s) for real s >= 0.
  double laplace(double s) const { return 1.0 - one_minus_laplace(s); }

  /// 1 - phi~(s), accurate as s -> 0.
  double one_minus_laplace(double s) const {
    detail::require(s >= 0.0, "Laplace variable must be >= 0");
    if (s == 0.0) return 0.0;
    if (std::isinf(s)) return 1.0;
    switch (kind_) {
      case Kind::exponential:
        return s / (rate_ + s);
      case Kind::mittag_leffler: {
        const double sb = std::pow(s, beta_);
        return sb / (1.0 + sb);
      }
      case Kind::pareto:
        return pareto_one_minus_laplace(beta_, theta_ * s);
    }
    return 0.0;
  }

  /// phi~(s) for complex s with Re s > 0 (closed-form laws only).
  std::complex<double> laplace(std::complex<double> s) const {
    switch (kind_) {
      case Kind::exponential:
        return rate_ / (rate_ + s);
      case Kind::mittag_leffler:
        return 1.0 / (1.0 + std::pow(s, beta_));
      case Kind::pareto:
        if (s.imag() == 0.0) return laplace(s.real());
        throw DomainError("complex Laplace transform of the Pareto law is not available");
    }
    return 0.0;
  }

  bool has_complex_laplace() const { return kind_ != Kind::pareto; }

  /// Lomax transform: 1 - phi~ = x^beta e^x Gamma(1-beta, x), x = theta s.
  static double pareto_one_minus_laplace(double beta, double x) {
    const double a = 1.0 - beta;
    if (x < 600.0) return std::pow(x, beta) * std::exp(x) * boost::math::tgamma(a, x);
    // e^x Gamma(a, x) ~ x^(a-1) sum_k (a-1)(a-2)...(a-k) / x^k
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
      term *= (a - k) / x;
      sum += term;
      if (std::abs(term) < 1e-17) break;
    }
    return std::pow(x, beta) * std::pow(x, a - 1.0) * sum;
  }

 private:
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  Kind kind_ = Kind::exponential;
  double beta_ = 1.0;
  double rate_ = 1.0;
  double theta_ = 1.0;
  double lambda_ = 1.0;
  double tail_c_ = 0.0;
};

// ---------------------------------------------------------------------------

class JumpLaw {
 public:
  enum class Kind { two_point, gaussian, sym_pareto, sym_stable, unit_drift };

  /// +-1 with probability 1/2 each.
  static JumpLaw two_point() {
    JumpLaw j;
    j.kind_ = Kind::two_point;
    j.alpha_ = 2.0;
    j.sigma2_ = 1.0;
    j.mu_ = 0.5;
    return j;
  }

  /// Centered normal with standard deviation sigma.
  static JumpLaw gaussian(double sigma) {
    detail::require(sigma > 0.0 && std::isfinite(sigma), "Gaussian sigma must be > 0");
    JumpLaw j;
    j.kind_ = Kind::gaussian;
    j.alpha_ = 2.0;
    j.sigma2_ = sigma * sigma;
    j.mu_ = j.sigma2_ / 2.0;
    return j;
  }

  /// X = S theta (1-U)^(-1/alpha), S = +-1: P(X > x) = (1/2)(x/theta)^-alpha for x >= theta.
  /// Each side carries b/alpha x^-alpha with b = alpha theta^alpha / 2.
  static JumpLaw sym_pareto(double alpha, double theta) {
    detail::require(alpha > 0.0 && alpha < 2.0, "symmetric Pareto exponent must lie in (0, 2)");
    detail::require(theta > 0.0 && std::isfinite(theta), "symmetric Pareto scale must be > 0");
    JumpLaw j;
    j.kind_ = Kind::sym_pareto;
    j.alpha_ = alpha;
    j.theta_ = theta;
    j.tail_b_ = alpha * std::pow(theta, alpha) / 2.0;
    j.mu_ = j.tail_b_ * detail::kPi / (std::tgamma(alpha + 1.0) * std::sin(alpha * detail::kPi / 2.0));
    j.sigma2_ = detail::kInf;
    return j;
  }

  /// Fourier transform exp(-|k|^alpha); alpha = 2 is the normal law with variance 2.
  static JumpLaw sym_stable(double alpha) {
    detail::require(alpha > 0.0 && alpha <= 2.0, "stable index must lie in (0, 2]");
    JumpLaw j;
    j.kind_ = Kind::sym_stable;
    j.alpha_ = alpha;
    j.mu_ = 1.0;
    if (alpha == 2.0) {
      j.sigma2_ = 2.0;
    } else {
      j.sigma2_ = detail::kInf;
      j.tail_b_ = std::tgamma(alpha + 1.0) * std::sin(alpha * detail::kPi / 2.0) / detail::kPi;
    }
    return j;
  }

  /// Deterministic unit step, w(x) = delta(x - 1): the renewal counting embedding.
  static JumpLaw unit_drift() {
    JumpLaw j;
    j.kind_ = Kind::unit_drift;
    j.alpha_ = 1.0;
    j.sigma2_ = 1.0;
    j.mu_ = detail::kInf;
    return j;
  }

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  double sigma2() const { return sigma2_; }
  double mu_scale() const { return mu_; }
  double tail_b() const { return tail_b_; }
  bool symmetric() const { return kind_ != Kind::unit_drift; }
  bool finite_variance() const { return std::isfinite(sigma2_); }

  std::string describe() const {
    char buf[96];
    switch (kind_) {
      case Kind::two_point:
        return "two_point";
      case Kind::gaussian:
        std::snprintf(buf, sizeof buf, "gaussian(sigma=%.17g)", std::sqrt(sigma2_));
        return buf;
      case Kind::sym_pareto:
        std::snprintf(buf, sizeof buf, "sym_pareto(alpha=%.17g,theta=%.17g)", alpha_, theta_);
        return buf;
      case Kind::sym_stable:
        std::snprintf(buf, sizeof buf, "sym_stable(alpha=%.17g)", alpha_);
        return buf;
      case Kind::unit_drift:
        return "unit_drift";
    }
    return "?";
  }

  /// Real Fourier transform w^(k) = E cos(k X) of a symmetric law.
  double fourier(double k) const { return 1.0 - one_minus_fourier(k); }

  /// 1 - w^(k), accurate as k -> 0.
  double one_minus_fourier(double k) const {
    detail::require(symmetric(), "the unit drift has a complex Fourier transform; use characteristic()");
    k = std::abs(k);
    switch (kind_) {
      case Kind::two_point:
        return 2.0 * std::sin(k / 2.0) * std::sin(k / 2.0);
      case Kind::gaussian:
        return -std::expm1(-sigma2_ * k * k / 2.0);
      case Kind::sym_stable:
        return -std::expm1(-std::pow(k, alpha_));
      case Kind::sym_pareto:
        return sym_pareto_one_minus_fourier(alpha_, theta_ * k);
      case Kind::unit_drift:
        break;
    }
    return 0.0;
  }

  /// E exp(i k X).
  std::complex<double> characteristic(double k) const {
    if (kind_ == Kind::unit_drift) return std::polar(1.0, k);
    return fourier(k);
  }

  /// Symmetrized Pareto: 1 - w^ = alpha y^alpha int_y^inf (1 - cos u) u^(-alpha-1) du with y = theta |k|.
  static double sym_pareto_one_minus_fourier(double alpha, double y) {
    if (y == 0.0) return 0.0;
    if (y <= 1.0) {
      const double full = alpha == 1.0 ? detail::kPi / 2.0
                                       : std::tgamma(1.0 - alpha) * std::cos(detail::kPi * alpha / 2.0) / alpha;
      const auto f = [=](double u) {
        if (u <= 0.0) return 0.0;
        if (u < 1e-6) return 0.5 * std::pow(u, 1.0 - alpha);
        const double h = std::sin(u / 2.0);
        return 2.0 * h * h * std::pow(u, -alpha - 1.0);
      };
      const double head = quad::finite(f, 0.0, y, 1e-14).value;
      return alpha * std::pow(y, alpha) * (full - head);
    }
    // w^ = alpha y^alpha int_0^inf cos(y + v) (y + v)^(-alpha-1) dv
    const auto g = [=](double v) { return std::pow(y + v, -alpha - 1.0); };
    const double ic = quad::cosine_transform(g, 1.0).value;
    const double is = quad::sine_transform(g, 1.0).value;
    return 1.0 - alpha * std::pow(y, alpha) * (std::cos(y) * ic - std::sin(y) * is);
  }

 private:
  Kind kind_ = Kind::two_point;
  double alpha_ = 2.0;
  double theta_ = 1.0;
  double sigma2_ = 1.0;
  double mu_ = 0.5;
  double tail_b_ = 0.0;
};

}  // namespace fracwalk
