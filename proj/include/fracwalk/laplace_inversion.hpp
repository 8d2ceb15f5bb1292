#pragma once

// Numerical inversion of Laplace transforms on a deformed Talbot contour
//   z(p) = (N/t) (sigma + mu p cot(a p) + i nu p),  -pi < p < pi,
// with Weideman's parameters and the midpoint rule in p. The error is
// estimated by repeating the sum with 2N/3 nodes: the discretization error
// falls like exp(-1.36 N) while roundoff grows with N, so the check stays
// below the default node count instead of doubling it. Transforms that are
// nearly singular close to the cut get more nodes in steps of 16.

#include "fracwalk/errors.hpp"
#include "fracwalk/special_functions.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace fracwalk {

struct TalbotOptions {
  int nodes = 48;
  /// On a failed check the node count grows by 16 up to this limit.
  int max_nodes = 96;
  /// Accept when |f_N - f_2N| <= abs_tol + rel_tol |f_2N|.
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  bool check = true;
};

namespace detail {

template <class F>
double talbot_sum(F&& transform, double t, int n) {
  constexpr double sigma = -0.6122;
  constexpr double mu = 0.5017;
  constexpr double nu = 0.2645;
  constexpr double a = 0.6407;
  const double h = 2.0 * kPi / n;
  const double scale = n / t;
  double acc = 0.0;
  for (int k = 0; k < n / 2; ++k) {
    const double p = (k + 0.5) * h;
    const double cot = 1.0 / std::tan(a * p);
    const double sn = std::sin(a * p);
    const std::complex<double> z = scale * std::complex<double>(sigma + mu * p * cot, nu * p);
    const std::complex<double> dz = scale * std::complex<double>(mu * cot - mu * a * p / (sn * sn), nu);
    const std::complex<double> fz = transform(z);
    acc += (std::exp(z * t) * fz * dz).imag();
  }
  return acc * h / kPi;
}

}  // namespace detail

/// f(t) from F(s) analytic to the right of a branch cut on the negative real axis.
template <class F>
EvalResult<double> talbot_invert(F&& transform, double t, const TalbotOptions& opt = {}) {
  detail::require(t > 0.0 && std::isfinite(t), "inversion time must be positive");
  detail::require(opt.nodes >= 16 && opt.nodes % 2 == 0, "Talbot node count must be even and >= 16");
  double fine = detail::talbot_sum(transform, t, opt.nodes);
  if (!opt.check) return {fine, 0.0, Method::integral};
  int coarse_nodes = 2 * ((opt.nodes / 3 * 2 + 1) / 2);
  double coarse = detail::talbot_sum(transform, t, coarse_nodes);
  int n = opt.nodes;
  double err = std::abs(fine - coarse);
  while (!(std::isfinite(fine) && err <= opt.abs_tol + opt.rel_tol * std::abs(fine)) && n + 16 <= opt.max_nodes) {
    coarse = fine;
    coarse_nodes = n;
    n += 16;
    fine = detail::talbot_sum(transform, t, n);
    err = std::abs(fine - coarse);
  }
  if (!std::isfinite(fine) || err > opt.abs_tol + opt.rel_tol * std::abs(fine))
    throw InversionError("Talbot inversion at t = " + std::to_string(t) + " disagrees between " +
                         std::to_string(coarse_nodes) + " and " + std::to_string(n) + " nodes by " +
                         std::to_string(err));
  return {fine, err, Method::integral};
}

}  // namespace fracwalk
