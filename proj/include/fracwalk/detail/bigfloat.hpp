#pragma once

// Minimal RAII handle over an MPFR value with an explicit, per-object
// precision. Used only by the extended-precision series paths.

#include <mpfr.h>

#include <cmath>
#include <utility>

namespace fracwalk::detail {

inline mpfr_prec_t digits_to_bits(unsigned digits10) {
  return static_cast<mpfr_prec_t>(std::ceil(digits10 * 3.3219280948873623)) + 8;
}

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits, double v = 0.0) {
    mpfr_init2(x_, bits);
    mpfr_set_d(x_, v, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_swap(x_, o.x_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpfr_set(x_, o.x_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(x_, o.x_);
    return *this;
  }
  BigFloat& operator=(double v) {
    mpfr_set_d(x_, v, MPFR_RNDN);
    return *this;
  }
  ~BigFloat() { mpfr_clear(x_); }

  mpfr_prec_t bits() const { return mpfr_get_prec(x_); }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(x_) != 0; }
  bool is_integer() const { return mpfr_integer_p(x_) != 0; }
  int sign() const { return mpfr_sgn(x_); }
  /// exponent e with |x| in [2^(e-1), 2^e); very negative for zero.
  long exponent2() const { return is_zero() ? -(1L << 30) : static_cast<long>(mpfr_get_exp(x_)); }

  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(x_, x_, o.x_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    mpfr_sub(x_, x_, o.x_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpfr_mul(x_, x_, o.x_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    mpfr_div(x_, x_, o.x_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(double v) {
    mpfr_mul_d(x_, x_, v, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(double v) {
    mpfr_div_d(x_, x_, v, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator+=(double v) {
    mpfr_add_d(x_, x_, v, MPFR_RNDN);
    return *this;
  }
  BigFloat& div_ui(unsigned long v) {
    mpfr_div_ui(x_, x_, v, MPFR_RNDN);
    return *this;
  }
  BigFloat& negate() {
    mpfr_neg(x_, x_, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }

  static BigFloat pi(mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_const_pi(r.x_, MPFR_RNDN);
    return r;
  }
  /// Gamma(x); caller must avoid the poles.
  static BigFloat gamma(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_gamma(r.x_, x.x_, MPFR_RNDN);
    return r;
  }
  static BigFloat sin(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_sin(r.x_, x.x_, MPFR_RNDN);
    return r;
  }
  static BigFloat cos(const BigFloat& x) {
    BigFloat r(x.bits());
    mpfr_cos(r.x_, x.x_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t x_;
};

}  // namespace fracwalk::detail
