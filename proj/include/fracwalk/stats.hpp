#pragma once

// Small statistics toolkit for Monte Carlo checks.

#include "fracwalk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace fracwalk::stats {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double tot = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / tot;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / tot;
    n += o.n;
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

inline Moments moments(std::span<const double> xs) {
  Moments m;
  for (double x : xs) m.add(x);
  return m;
}

/// Standard error of the sample variance from the fourth central moment.
inline double variance_std_error(std::span<const double> xs) {
  const Moments m = moments(xs);
  const double n = static_cast<double>(m.n);
  double m4 = 0.0;
  for (double x : xs) m4 += std::pow(x - m.mean, 4);
  m4 /= n;
  const double v = m.m2 / n;
  return std::sqrt(std::max(0.0, (m4 - v * v) / n));
}

/// sup |F_n - F| for a continuous reference CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  detail::require(!xs.empty(), "KS statistic needs data");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  detail::require(!a.empty() && !b.empty(), "KS statistic needs data");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

inline double ks_critical_1pct(std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return 1.63 * std::sqrt((nn + mm) / (nn * mm));
}

/// Equal-width histogram on [lo, hi) with two outer bins for mass outside.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> counts;  // interior bins
  double below = 0.0;
  double above = 0.0;
  std::size_t total = 0;

  Histogram(double lo_, double hi_, std::size_t bins) : lo(lo_), hi(hi_), counts(bins, 0.0) {
    detail::require(hi > lo && bins > 0, "histogram needs hi > lo and at least one bin");
  }

  double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double centre(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }

  void add(double x) {
    ++total;
    if (x < lo) {
      below += 1.0;
    } else if (x >= hi) {
      above += 1.0;
    } else {
      auto i = static_cast<std::size_t>((x - lo) / width());
      counts[std::min(i, counts.size() - 1)] += 1.0;
    }
  }

  void merge(const Histogram& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    below += o.below;
    above += o.above;
    total += o.total;
  }

  /// Probability estimate of interior bin i.
  double mass(std::size_t i) const { return counts[i] / static_cast<double>(total); }
  double density(std::size_t i) const { return mass(i) / width(); }
};

/// Total variation between a histogram and reference bin masses (interior bins,
/// then the mass below and above the grid).
inline double total_variation(const Histogram& h, std::span<const double> ref_bins, double ref_below,
                              double ref_above) {
  detail::require(ref_bins.size() == h.counts.size(), "reference bins do not match the histogram");
  const double n = static_cast<double>(h.total);
  double tv = std::abs(h.below / n - ref_below) + std::abs(h.above / n - ref_above);
  for (std::size_t i = 0; i < ref_bins.size(); ++i) tv += std::abs(h.counts[i] / n - ref_bins[i]);
  return 0.5 * tv;
}

/// Total variation between two probability vectors (missing entries count as zero).
inline double total_variation(std::span<const double> p, std::span<const double> q) {
  double tv = 0.0;
  const std::size_t n = std::max(p.size(), q.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    tv += std::abs(a - b);
  }
  return 0.5 * tv;
}

}  // namespace fracwalk::stats
