#pragma once

// Thin wrappers over Boost.Math quadrature. Every routine returns the value
// together with the integrator's own error estimate; `checked` turns an
// unacceptable estimate into a QuadratureError.

#include "fracwalk/detail/numeric.hpp"
#include "fracwalk/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fracwalk::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
};

namespace detail {

// Integrators cache abscissae lazily and are not safe to share across threads.
inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_instance() {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  return integrator;
}

inline boost::math::quadrature::exp_sinh<double>& exp_sinh_instance() {
  thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
  return integrator;
}

}  // namespace detail

/// Finite interval; tolerates integrable endpoint singularities.
template <class F>
Result finite(F&& f, double a, double b, double tol = 1e-12) {
  if (a == b) return {};
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = detail::tanh_sinh_instance().integrate(f, a, b, tol, &err, &l1, &levels);
  return {v, err * std::max(1.0, l1)};
}

/// [a, inf) for integrands decaying at least algebraically.
template <class F>
Result upper(F&& f, double a, double tol = 1e-12) {
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = detail::exp_sinh_instance().integrate(f, a, fracwalk::detail::kInf, tol, &err, &l1,
                                                         &levels);
  return {v, err * std::max(1.0, l1)};
}

/// Adaptive 15-point Gauss-Kronrod on a finite smooth interval.
template <class F>
Result gauss_kronrod(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 15) {
  if (a == b) return {};
  double err = 0.0;
  double l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol, &err, &l1);
  return {v, err};
}

/// Sum of finite-interval integrals over consecutive breakpoints, with an
/// optional exp-sinh tail when the last breakpoint is +inf.
template <class F>
Result piecewise(F&& f, std::span<const double> breaks, double tol = 1e-12) {
  Result total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (std::isinf(b))
      total += upper(f, a, tol);
    else
      total += finite(f, a, b, tol);
  }
  return total;
}

namespace detail {

// One cached integrator per (thread, tolerance); callers use a handful of fixed tolerances.
// A failed call leaves the integrator starting at its finest level, so it is rebuilt.
template <class Integrator>
std::unique_ptr<Integrator>& ooura_slot(double tol) {
  thread_local std::vector<std::pair<double, std::unique_ptr<Integrator>>> cache;
  for (auto& [t, ptr] : cache)
    if (t == tol) return ptr;
  cache.emplace_back(tol, std::make_unique<Integrator>(tol, 4));
  return cache.back().second;
}

template <class Integrator, class F>
Result ooura(F&& f, double omega, double tol) {
  auto& slot = ooura_slot<Integrator>(tol);
  auto [v, rel] = slot->integrate(f, omega);
  if (!(rel <= tol)) slot = std::make_unique<Integrator>(tol, 4);
  return {v, std::isfinite(rel) ? rel * std::abs(v) : std::abs(v)};
}

}  // namespace detail

/// Ooura's double-exponential rule for int_0^inf f(k) cos(omega k) dk, omega > 0.
/// The tolerance is relative to the value of the integral; the returned error is absolute.
template <class F>
Result cosine_transform(F&& f, double omega, double tol = 1e-12) {
  return detail::ooura<boost::math::quadrature::ooura_fourier_cos<double>>(f, omega, tol);
}

template <class F>
Result sine_transform(F&& f, double omega, double tol = 1e-12) {
  return detail::ooura<boost::math::quadrature::ooura_fourier_sin<double>>(f, omega, tol);
}

/// Throws when the estimated error exceeds `limit`.
inline const Result& checked(const Result& r, double limit, const char* what) {
  if (!std::isfinite(r.value) || !(r.error <= limit))
    throw QuadratureError(std::string(what) + ": error estimate " + std::to_string(r.error) +
                          " exceeds " + std::to_string(limit));
  return r;
}

}  // namespace fracwalk::quad
