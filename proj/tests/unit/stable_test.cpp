#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "mstab/stable.hpp"

namespace {

using namespace mstab;

TEST(Stable, CAlphaKnownValues) {
  EXPECT_NEAR(c_alpha(1.0), 2.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(c_alpha(0.5), 0.7978845608028654, 1e-12);
  EXPECT_NEAR(c_alpha(1.5), 0.3989422804014327, 1e-12);
  // Reference values of 1 / int_0^inf x^-a sin x dx computed in extended precision.
  EXPECT_NEAR(c_alpha(0.3), 0.864621260285742971, 1e-13);
  EXPECT_NEAR(c_alpha(0.8), 0.704896132499975933, 1e-13);
  EXPECT_NEAR(c_alpha(1.2), 0.555915716520413543, 1e-13);
  EXPECT_NEAR(c_alpha(1.7), 0.262614156510334766, 1e-13);
  EXPECT_NEAR(c_alpha(1.95), 0.0489436781259401497, 1e-13);
}

TEST(Stable, CAlphaIsContinuousAcrossTheSeriesWindow) {
  for (double e : {1e-6, 1e-4, 9.99e-4}) {
    EXPECT_NEAR(c_alpha(1.0 + e), 2.0 / std::numbers::pi, 2 * e);
    EXPECT_NEAR(c_alpha(1.0 - e), 2.0 / std::numbers::pi, 2 * e);
  }
  const double w = kCAlphaSeriesWindow;
  for (double s : {-1.0, 1.0}) {
    const double inside = c_alpha(1.0 + s * w * (1 - 1e-9));
    const double outside = c_alpha(1.0 + s * w * (1 + 1e-9));
    EXPECT_NEAR(inside, outside, 1e-12);
  }
}

// int_0^inf x^-a sin x dx computed directly: on [0, 1] as
// int x^-a (sin x - x) + 1 / (2 - a), on [1, inf) via sin(1 + y) with Fourier rules.
double sine_integral(double a) {
  boost::math::quadrature::ooura_fourier_sin<double> s;
  boost::math::quadrature::ooura_fourier_cos<double> c;
  auto head = [a](double x) { return x == 0.0 ? 0.0 : std::pow(x, -a) * (std::sin(x) - x); };
  const double near =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(head, 0.0, 1.0, 15, 1e-14) +
      1.0 / (2.0 - a);
  auto g = [a](double y) { return std::pow(1.0 + y, -a); };
  return near + std::cos(1.0) * s.integrate(g, 1.0).first + std::sin(1.0) * c.integrate(g, 1.0).first;
}

TEST(Stable, CAlphaMatchesOscillatoryQuadrature) {
  for (int k = 0; k < 11; ++k) {
    const double a = 0.1 + 0.185 * k;
    EXPECT_NEAR(c_alpha(a), 1.0 / sine_integral(a), 1e-8 * c_alpha(a)) << "alpha=" << a;
  }
}

TEST(Stable, CAlphaRejectsOutsideRange) {
  EXPECT_THROW(c_alpha(0.0), DomainError);
  EXPECT_THROW(c_alpha(2.0), DomainError);
}

TEST(Stable, CharacteristicFunction) {
  EXPECT_EQ(stable_cf(StableParams(1.5, 1.0), 0.0), 1.0);
  EXPECT_NEAR(stable_cf(StableParams(1.5, 1.0), 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(stable_cf(StableParams(1.5, 2.0), -0.5), std::exp(-1.0), 1e-15);
  EXPECT_THROW(StableParams(2.5, 1.0), DomainError);
  EXPECT_THROW(StableParams(1.5, -1.0), DomainError);
}

// One-sample KS distance against an exact CDF.
template <class Cdf>
double ks_one_sample(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    d = std::max({d, F - i / n, (i + 1) / n - F});
  }
  return d;
}

TEST(Stable, OracleIsCauchyAtAlphaOne) {
  const std::size_t n = 50000;
  const auto x = stable_oracle_sample(StableParams(1.0, 2.0), n, 3);
  const double d = ks_one_sample(x, [](double v) { return 0.5 + std::atan(v / 2.0) / std::numbers::pi; });
  EXPECT_LT(d, 1.95 / std::sqrt(double(n)));  // 99.9% one-sample band
}

TEST(Stable, OracleIsGaussianAtAlphaTwo) {
  // S_2(sigma) is N(0, 2 sigma^2).
  const std::size_t n = 50000;
  const auto x = stable_oracle_sample(StableParams(2.0, 1.5), n, 4);
  const double sd = 1.5 * std::sqrt(2.0);
  const double d = ks_one_sample(x, [sd](double v) { return 0.5 * std::erfc(-v / (sd * std::sqrt(2.0))); });
  EXPECT_LT(d, 1.95 / std::sqrt(double(n)));
}

TEST(Stable, OracleMatchesCharacteristicFunction) {
  const std::size_t n = 100000;
  for (double a : {0.7, 1.3, 1.8}) {
    const auto x = stable_oracle_sample(StableParams(a, 1.2), n, 5);
    for (double th : {0.3, 1.0, 2.0}) {
      double re = 0;
      for (double v : x) re += std::cos(th * v);
      EXPECT_NEAR(re / n, stable_cf(StableParams(a, 1.2), th), 4.0 / std::sqrt(double(n)));
    }
  }
}

TEST(Stable, OracleIsSeedDeterministic) {
  EXPECT_EQ(stable_oracle_sample(StableParams(1.5, 1.0), 100, 9),
            stable_oracle_sample(StableParams(1.5, 1.0), 100, 9));
  EXPECT_NE(stable_oracle_sample(StableParams(1.5, 1.0), 100, 9),
            stable_oracle_sample(StableParams(1.5, 1.0), 100, 10));
}

TEST(Stable, NormOfIndicator) {
  const auto ms = MeasureSpace::finite(2.0);
  auto f = [](double x) { return x <= 0.7 ? 1.0 : 0.0; };
  EXPECT_NEAR(f_alpha_norm(f, 1.5, ms, 1e-10, {0.7}), std::pow(0.7, 1.0 / 1.5), 1e-9);
}

TEST(Stable, NormOfExponentialOnRealLine) {
  // int_0^inf e^{-a x} dx = 1/a, so the norm is a^{-1/a}.
  const auto ms = MeasureSpace::blocks(BlockPreset::two_sided_dyadic);
  auto f = [](double x) { return x >= 0 ? std::exp(-x) : 0.0; };
  EXPECT_NEAR(f_alpha_norm(f, 1.4, ms, 1e-10), std::pow(1.4, -1.0 / 1.4), 1e-9);
}

TEST(Stable, NonIntegrableKernelIsReported) {
  const auto ms = MeasureSpace::blocks(BlockPreset::half_line_dyadic);
  auto f = [](double) { return 1.0; };
  EXPECT_THROW(f_alpha_norm(f, 1.5, ms, 1e-8), NonIntegrableKernel);
}

}  // namespace
