#include "fracwalk/stats.hpp"
#include "fracwalk/variates.hpp"

#include <gtest/gtest.h>

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fw = fracwalk;
using fw::detail::kPi;

namespace {

template <class F>
std::vector<double> draw(std::size_t n, std::uint64_t stream, F&& f) {
  fw::RngStream rng(20240917, stream);
  std::vector<double> out(n);
  for (auto& x : out) x = f(rng);
  return out;
}

/// Mean of g(X) with its standard error.
template <class G>
fw::stats::Moments mean_of(const std::vector<double>& xs, G&& g) {
  fw::stats::Moments m;
  for (double x : xs) m.add(g(x));
  return m;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  auto r = fw::detail::philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r, (std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  r = fw::detail::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(r, (std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  r = fw::detail::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(r, (std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, DeterministicAndStreamsDiffer) {
  fw::RngStream a(7, 3);
  fw::RngStream b(7, 3);
  fw::RngStream c(7, 4);
  fw::RngStream d(8, 3);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    same_c += x == c.next_u64();
    same_d += x == d.next_u64();
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
  EXPECT_EQ(a.position(), 1000u);
  // frozen first words guard against accidental changes of the construction
  fw::RngStream e(0, 0);
  EXPECT_EQ(e.next_u64(), 0xe169c58d6627e8d5ull);
  EXPECT_EQ(e.next_u64(), 0x9b00dbd8bc57ac4cull);
}

TEST(RngStream, UniformsInOpenIntervalAndPathStreams) {
  fw::RngStream r(1, 1);
  double lo = 1.0;
  double hi = 0.0;
  fw::stats::Moments m;
  for (int i = 0; i < 200000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    m.add(u);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(m.mean, 0.5, 3 * m.std_error());
  auto p1 = fw::RngStream::for_path(5, 1, 0);
  auto p2 = fw::RngStream::for_path(5, 1, 1);
  auto p1b = fw::RngStream::for_path(5, 1, 0);
  EXPECT_NE(p1.next_u64(), p2.next_u64());
  p1 = fw::RngStream::for_path(5, 1, 0);
  EXPECT_EQ(p1.next_u64(), p1b.next_u64());
  // adjacent path streams are uncorrelated
  fw::stats::Moments prod;
  for (std::uint64_t k = 0; k < 20000; ++k) {
    auto x = fw::RngStream::for_path(5, 1, k);
    auto y = fw::RngStream::for_path(5, 1, k + 1);
    prod.add((x.uniform() - 0.5) * (y.uniform() - 0.5));
  }
  EXPECT_NEAR(prod.mean, 0.0, 4 * prod.std_error());
}

TEST(Waiting, ExponentialMean) {
  const auto law = fw::WaitingLaw::exponential(2.0);
  const auto xs = draw(1000000, 1, [&](auto& r) { return fw::sample_waiting(law, r); });
  const auto m = fw::stats::moments(xs);
  EXPECT_NEAR(m.mean, 0.5, 3 * m.std_error());
  EXPECT_DOUBLE_EQ(law.lambda_scale(), 0.5);
}

TEST(Waiting, KolmogorovSmirnovAgainstCdf) {
  const std::size_t n = 100000;
  for (const auto& law : {fw::WaitingLaw::exponential(1.5), fw::WaitingLaw::pareto(0.5, 1.0),
                          fw::WaitingLaw::pareto(0.8, 3.0), fw::WaitingLaw::mittag_leffler(0.5),
                          fw::WaitingLaw::mittag_leffler(0.9), fw::WaitingLaw::mittag_leffler(1.0)}) {
    const auto xs = draw(n, 2, [&](auto& r) { return fw::sample_waiting(law, r); });
    EXPECT_LT(fw::stats::ks_statistic(xs, [&](double t) { return law.cdf(t); }), fw::stats::ks_critical_1pct(n))
        << law.describe();
    EXPECT_GT(*std::min_element(xs.begin(), xs.end()), 0.0);
  }
}

TEST(Waiting, ClosedFormMittagLefflerMatchesInversionSampler) {
  const std::size_t n = 100000;
  const auto a = draw(n, 3, [](auto& r) { return fw::sample_mittag_leffler(0.5, r); });
  const auto b = draw(n, 4, [](auto& r) { return fw::sample_mittag_leffler_inversion(0.5, r); });
  EXPECT_LT(fw::stats::ks_two_sample(a, b), fw::stats::ks_critical_1pct(n, n));
}

TEST(Waiting, SurvivalInverseRoundTrip) {
  for (double beta : {0.2, 0.5, 0.95}) {
    for (double u : {1e-6, 0.01, 0.3, 0.9, 0.999999}) {
      const double t = fw::ml_survival_inverse(beta, u);
      EXPECT_NEAR(fw::ml_survival(beta, t), u, 1e-12 + 1e-10 * u) << beta << " " << u;
    }
  }
}

TEST(Waiting, ParetoEmpiricalSurvival) {
  const auto law = fw::WaitingLaw::pareto(0.5, 1.0);
  const auto xs = draw(1000000, 5, [&](auto& r) { return fw::sample_waiting(law, r); });
  const auto m = mean_of(xs, [](double t) { return t > 100.0 ? 1.0 : 0.0; });
  EXPECT_NEAR(m.mean, std::pow(101.0, -0.5), 3 * m.std_error());
}

TEST(Waiting, LawConstants) {
  const auto p = fw::WaitingLaw::pareto(0.6, 2.0);
  EXPECT_NEAR(p.tail_c(), 0.6 * std::pow(2.0, 0.6), 1e-15);
  EXPECT_NEAR(p.lambda_scale(), std::pow(2.0, 0.6) * std::tgamma(0.4), 1e-13);
  EXPECT_EQ(fw::WaitingLaw::mittag_leffler(0.4).lambda_scale(), 1.0);
  EXPECT_THROW(fw::WaitingLaw::pareto(1.0, 1.0), fw::DomainError);
  EXPECT_THROW(fw::WaitingLaw::exponential(0.0), fw::DomainError);
  EXPECT_THROW(fw::WaitingLaw::mittag_leffler(1.5), fw::DomainError);
}

TEST(Waiting, ParetoTransformAgainstQuadrature) {
  for (double beta : {0.3, 0.5, 0.75}) {
    const auto law = fw::WaitingLaw::pareto(beta, 1.5);
    for (double s : {1e-3, 0.1, 1.0, 7.0, 800.0}) {
      const auto f = [&](double t) { return t <= 0.0 ? 0.0 : std::exp(-s * t) * law.density(t); };
      const std::array<double, 4> breaks{0.0, 1.0 / s, 50.0 / s, fw::detail::kInf};
      const double q = fw::quad::piecewise(f, breaks, 1e-13).value;
      EXPECT_NEAR(law.laplace(s), q, 1e-10) << beta << " " << s;
    }
  }
}

TEST(Waiting, PowerLawScaleConstant) {
  // analytic transform: (1 - phi~(s)) / (lambda s^beta) -> 1
  for (double beta : {0.25, 0.5, 0.75}) {
    const auto law = fw::WaitingLaw::pareto(beta, 1.0);
    const double s = 1e-12;
    EXPECT_NEAR(law.one_minus_laplace(s) / (law.lambda_scale() * std::pow(s, beta)), 1.0, 0.01) << beta;
  }
  // empirical transform
  const auto law = fw::WaitingLaw::pareto(0.25, 1.0);
  const auto xs = draw(1000000, 6, [&](auto& r) { return fw::sample_waiting(law, r); });
  for (double s : {1e-2, 1e-3}) {
    const auto m = mean_of(xs, [&](double t) { return -std::expm1(-s * t); });
    EXPECT_NEAR(m.mean / (law.lambda_scale() * std::pow(s, 0.25)), 1.0, 0.05) << s;
  }
}

TEST(Jumps, TwoPointAndGaussianMoments) {
  const auto tp = fw::JumpLaw::two_point();
  const auto xs = draw(100000, 7, [&](auto& r) { return fw::sample_jump(tp, r); });
  for (double x : xs) EXPECT_EQ(std::abs(x), 1.0);
  EXPECT_NEAR(mean_of(xs, [](double x) { return x * x; }).mean, 1.0, 1e-15);
  EXPECT_NEAR(fw::stats::moments(xs).mean, 0.0, 3 * fw::stats::moments(xs).std_error());
  EXPECT_DOUBLE_EQ(tp.mu_scale(), 0.5);
  const auto g = fw::JumpLaw::gaussian(1.7);
  EXPECT_DOUBLE_EQ(g.mu_scale(), 1.7 * 1.7 / 2);
  const auto ys = draw(1000000, 8, [&](auto& r) { return fw::sample_jump(g, r); });
  const double v = fw::stats::moments(ys).variance();
  EXPECT_NEAR(v, 1.7 * 1.7, 3 * fw::stats::variance_std_error(ys));
}

TEST(Jumps, StableAlphaTwoHasVarianceTwo) {
  const auto xs = draw(1000000, 9, [](auto& r) { return fw::sample_sym_stable(2.0, r); });
  EXPECT_NEAR(fw::stats::moments(xs).variance(), 2.0, 3 * fw::stats::variance_std_error(xs));
}

TEST(Jumps, StableCharacteristicFunction) {
  for (double alpha : {0.5, 1.0, 1.5, 1.9}) {
    const auto xs = draw(400000, 10, [&](auto& r) { return fw::sample_sym_stable(alpha, r); });
    for (double k : {0.5, 1.0, 2.0}) {
      const auto m = mean_of(xs, [&](double x) { return std::cos(k * x); });
      EXPECT_NEAR(m.mean, std::exp(-std::pow(k, alpha)), 3.5 * m.std_error()) << alpha << " " << k;
      const auto s = mean_of(xs, [&](double x) { return std::sin(k * x); });
      EXPECT_NEAR(s.mean, 0.0, 3.5 * s.std_error());
    }
  }
}

TEST(Jumps, SymmetricParetoTailAndSymmetry) {
  const auto law = fw::JumpLaw::sym_pareto(1.5, 1.0);
  fw::RngStream rng(11, 11);
  std::size_t beyond = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  const std::size_t n = 10000000;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = fw::sample_jump(law, rng);
    beyond += std::abs(x) > 50.0;
    left += x < -2.0;
    right += x > 2.0;
  }
  const double want = law.tail_b() / 1.5 * std::pow(50.0, -1.5) * 2.0;
  EXPECT_NEAR(static_cast<double>(beyond) / n / want, 1.0, 0.1);
  const double se = std::sqrt(static_cast<double>(left + right));
  EXPECT_NEAR(static_cast<double>(left), static_cast<double>(right), 3 * se);
}

TEST(Jumps, SymmetricParetoTransform) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto law = fw::JumpLaw::sym_pareto(alpha, 1.3);
    for (double k : {1e-3, 0.2, 0.7, 1.0, 3.0, 20.0}) {
      // independent route: w^(k) = alpha int_1^inf cos(k theta v) v^(-alpha-1) dv
      const auto g = [&](double v) { return alpha * std::pow(1.0 + v, -alpha - 1.0); };
      const double y = k * 1.3;
      const double w = std::cos(y) * fw::quad::cosine_transform(g, y).value -
                       std::sin(y) * fw::quad::sine_transform(g, y).value;
      EXPECT_NEAR(law.fourier(k), w, 1e-9) << alpha << " " << k;
    }
    // small-k expansion: (1 - w^) / (mu |k|^alpha) -> 1
    EXPECT_NEAR(law.one_minus_fourier(1e-6) / (law.mu_scale() * std::pow(1e-6, alpha)), 1.0, 0.01);
  }
  const auto law = fw::JumpLaw::sym_pareto(1.0, 1.0);
  const auto xs = draw(10000000, 12, [&](auto& r) { return fw::sample_jump(law, r); });
  for (double k : {1e-2, 1e-3}) {
    const auto m = mean_of(xs, [&](double x) { return 1.0 - std::cos(k * x); });
    EXPECT_NEAR(m.mean / (law.mu_scale() * k), 1.0, 0.05) << k;
    EXPECT_NEAR(m.mean, law.one_minus_fourier(k), 3 * m.std_error());
  }
}

TEST(Jumps, StableLawConstants) {
  for (double alpha : {0.7, 1.2, 1.8}) {
    const auto law = fw::JumpLaw::sym_stable(alpha);
    EXPECT_DOUBLE_EQ(law.mu_scale(), 1.0);
    EXPECT_NEAR(law.tail_b() * kPi / (std::tgamma(alpha + 1) * std::sin(alpha * kPi / 2)), 1.0, 1e-14);
  }
  EXPECT_THROW(fw::JumpLaw::sym_pareto(2.0, 1.0), fw::DomainError);
  EXPECT_THROW(fw::JumpLaw::unit_drift().fourier(1.0), fw::DomainError);
  EXPECT_NEAR(std::arg(fw::JumpLaw::unit_drift().characteristic(0.5)), 0.5, 1e-15);
}

TEST(OneSidedStable, LaplaceTransformAndPositivity) {
  for (double beta : {0.3, 0.5, 0.8}) {
    const auto xs = draw(400000, 13, [&](auto& r) { return fw::sample_one_sided_stable(beta, r); });
    EXPECT_GT(*std::min_element(xs.begin(), xs.end()), 0.0);
    for (double s : {0.5, 1.0, 2.0}) {
      const auto m = mean_of(xs, [&](double x) { return std::exp(-s * x); });
      EXPECT_NEAR(m.mean, std::exp(-std::pow(s, beta)), 3.5 * m.std_error()) << beta << " " << s;
    }
  }
}

TEST(OneSidedStable, HalfOrderMedian) {
  // Levy-Smirnov CDF erfc(1 / (2 sqrt t)); median from the inverse
  const double c = boost::math::erfc_inv(0.5);
  const double median = 1.0 / (4.0 * c * c);
  const std::size_t n = 400000;
  auto xs = draw(n, 14, [](auto& r) { return fw::sample_one_sided_stable(0.5, r); });
  std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
  const double dens = std::pow(4 * kPi, -0.5) * std::pow(median, -1.5) * std::exp(-1 / (4 * median));
  const double se = 0.5 / std::sqrt(static_cast<double>(n)) / dens;
  EXPECT_NEAR(xs[n / 2], median, 3 * se);
}

TEST(Determinism, SamplersReproduce) {
  const auto law = fw::WaitingLaw::mittag_leffler(0.6);
  const auto a = draw(1000, 15, [&](auto& r) { return fw::sample_waiting(law, r); });
  const auto b = draw(1000, 15, [&](auto& r) { return fw::sample_waiting(law, r); });
  EXPECT_EQ(a, b);
}
