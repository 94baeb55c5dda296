#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "mstab/measure.hpp"

namespace {

using namespace mstab;

// Independent CDFs of m-hat, written from the block masses.
double half_line_dyadic_cdf(double x) {
  if (x <= 0) return 0;
  double acc = 0;
  int j = 1;
  while (x >= j) {
    acc += std::ldexp(1.0, -j);
    ++j;
  }
  return acc + (x - (j - 1)) * std::ldexp(1.0, -j);
}

double zeta_half_cdf(double x) {
  const double c = 6.0 / (std::numbers::pi * std::numbers::pi);
  double acc = 0;
  int j = 1;
  while (x >= j) {
    acc += c / (double(j) * j);
    ++j;
  }
  return acc + (x - (j - 1)) * c / (double(j) * j);
}

double two_sided_cdf(double x, double (*half)(double)) {
  return x >= 0 ? 0.5 + 0.5 * half(x) : 0.5 - 0.5 * half(-x);
}

TEST(Measure, FiniteSpaceBasics) {
  const auto ms = MeasureSpace::finite(2.5);
  EXPECT_TRUE(ms.is_finite());
  EXPECT_EQ(ms.total_mass(), 2.5);
  EXPECT_EQ(hat_density(ms, 1.0), 0.4);
  EXPECT_EQ(r_of(ms, 0.3), 2.5);
  EXPECT_EQ(inverse_cdf(ms, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(inverse_cdf(ms, 0.5), 1.25);
  EXPECT_THROW(MeasureSpace::finite(0.0), DomainError);
  EXPECT_THROW(hat_density(ms, 3.0), DomainError);
}

TEST(Measure, InfiniteSpacesHaveInfiniteMass) {
  for (auto p : {BlockPreset::half_line_dyadic, BlockPreset::two_sided_zeta, BlockPreset::two_sided_dyadic})
    EXPECT_TRUE(std::isinf(MeasureSpace::blocks(p).total_mass()));
  EXPECT_FALSE(MeasureSpace::blocks(BlockPreset::half_line_dyadic).two_sided());
  EXPECT_TRUE(MeasureSpace::blocks(BlockPreset::two_sided_zeta).two_sided());
}

TEST(Measure, DensityTimesRatioIsOne) {
  for (auto p : {BlockPreset::half_line_dyadic, BlockPreset::two_sided_zeta, BlockPreset::two_sided_dyadic}) {
    const auto ms = MeasureSpace::blocks(p);
    for (double x : {0.0, 0.3, 1.0, 5.5, 17.2, 900.0, 1000.5}) {
      EXPECT_NEAR(hat_density(ms, x) * r_of(ms, x), 1.0, 4e-16) << ms.name() << " x=" << x;
      if (ms.two_sided()) {
        EXPECT_NEAR(hat_density(ms, -x - 0.1) * r_of(ms, -x - 0.1), 1.0, 4e-16);
      }
    }
  }
}

TEST(Measure, DyadicRatioIsExactPowerOfTwo) {
  const auto ms = MeasureSpace::blocks(BlockPreset::half_line_dyadic);
  EXPECT_EQ(r_of(ms, 0.5), 2.0);
  EXPECT_EQ(r_of(ms, 1.0), 4.0);
  EXPECT_EQ(r_of(ms, 2.999), 8.0);
  const auto two = MeasureSpace::blocks(BlockPreset::two_sided_dyadic);
  EXPECT_EQ(r_of(two, -0.5), 4.0);
  EXPECT_EQ(r_of(two, 0.5), 4.0);
}

TEST(Measure, BlockMassesSumToOne) {
  double dyadic = 0, zeta = 0;
  for (int j = 1; j <= 60; ++j) dyadic += block_mass(MeasureSpace::blocks(BlockPreset::half_line_dyadic), j);
  for (int j = 1; j <= 1000000; ++j) zeta += block_mass(MeasureSpace::blocks(BlockPreset::two_sided_zeta), j);
  EXPECT_NEAR(dyadic, 1.0, 1e-15);
  EXPECT_NEAR(zeta, 1.0, 1e-6);
}

TEST(Measure, InverseCdfInvertsIndependentCdf) {
  const auto half = MeasureSpace::blocks(BlockPreset::half_line_dyadic);
  const auto zeta = MeasureSpace::blocks(BlockPreset::two_sided_zeta);
  const auto dy2 = MeasureSpace::blocks(BlockPreset::two_sided_dyadic);
  for (int k = 1; k < 1000; ++k) {
    const double u = k / 1000.0;
    EXPECT_NEAR(half_line_dyadic_cdf(inverse_cdf(half, u)), u, 1e-13) << u;
    EXPECT_NEAR(two_sided_cdf(inverse_cdf(zeta, u), zeta_half_cdf), u, 1e-12) << u;
    EXPECT_NEAR(two_sided_cdf(inverse_cdf(dy2, u), half_line_dyadic_cdf), u, 1e-13) << u;
  }
}

TEST(Measure, InverseCdfIsMonotoneAndHitsBlockEdges) {
  const auto half = MeasureSpace::blocks(BlockPreset::half_line_dyadic);
  EXPECT_EQ(inverse_cdf(half, 0.0), 0.0);
  EXPECT_EQ(inverse_cdf(half, 0.5), 1.0);
  EXPECT_EQ(inverse_cdf(half, 0.75), 2.0);
  const auto zeta = MeasureSpace::blocks(BlockPreset::two_sided_zeta);
  EXPECT_EQ(inverse_cdf(zeta, 0.5), 0.0);
  double prev = -INFINITY;
  for (int k = 1; k < 20000; ++k) {
    const double x = inverse_cdf(zeta, k / 20000.0);
    ASSERT_GE(x, prev);
    prev = x;
  }
}

TEST(Measure, ExtremeQuantilesStayFinite) {
  const auto zeta = MeasureSpace::blocks(BlockPreset::two_sided_zeta);
  const double hi = inverse_cdf(zeta, std::nextafter(1.0, 0.0));
  EXPECT_TRUE(std::isfinite(hi));
  EXPECT_GT(hi, 1e14);
  // Far tail: half-profile mass beyond x is about (6 / pi^2) / x.
  const double x = inverse_cdf(zeta, 1.0 - 1e-9);
  EXPECT_NEAR(x, 6.0 / (std::numbers::pi * std::numbers::pi) / 2e-9, 100.0);
  EXPECT_THROW(inverse_cdf(zeta, 0.0), DomainError);
  EXPECT_THROW(inverse_cdf(zeta, 1.0), DomainError);
}

TEST(Measure, SampledBlocksPassChiSquare) {
  const auto zeta = MeasureSpace::blocks(BlockPreset::two_sided_zeta);
  const std::size_t n = 200000;
  const auto pts = sample_points(zeta, n, 11);
  // Cells: blocks 1..8 on each side, plus one tail cell per side.
  std::map<int, double> counts;
  for (double x : pts) {
    const int j = static_cast<int>(std::min(9.0, detail::block_index(x)));
    counts[x >= 0 ? j : -j] += 1;
  }
  const double c = 3.0 / (std::numbers::pi * std::numbers::pi);
  double tail = 0.5;
  for (int j = 1; j <= 8; ++j) tail -= c / (j * j);
  double chi2 = 0;
  int cells = 0;
  for (int s : {-1, 1})
    for (int j = 1; j <= 9; ++j) {
      const double p = j <= 8 ? c / (j * j) : tail;
      const double e = p * n;
      const double o = counts[s * j];
      chi2 += (o - e) * (o - e) / e;
      ++cells;
    }
  boost::math::chi_squared dist(cells - 1);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.999));
}

TEST(Measure, PoissonArrivalsAreIncreasingWithUnitRate) {
  const auto g = poisson_arrivals(100000, 5);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_GT(g[i], g[i - 1]);
  EXPECT_GT(g.front(), 0.0);
  // Gamma_n has mean n and standard deviation sqrt(n).
  EXPECT_NEAR(g.back(), 100000.0, 5 * std::sqrt(100000.0));
}

TEST(Measure, PoissonArrivalsAcceptCustomSource) {
  const auto g = poisson_arrivals(4, [] { return 0.5; });
  EXPECT_EQ(g, (std::vector<double>{0.5, 1.0, 1.5, 2.0}));
}

TEST(Measure, DrawsAreReproducibleAndPrefixStable) {
  const auto ms = MeasureSpace::blocks(BlockPreset::two_sided_dyadic);
  const auto a = draw_series(ms, 1000, 9);
  const auto b = draw_series(ms, 1000, 9);
  const auto c = draw_series(ms, 2000, 9);
  const auto d = draw_series(ms, 1000, 10);
  EXPECT_EQ(a.gammas, b.gammas);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.signs, b.signs);
  EXPECT_TRUE(std::equal(a.gammas.begin(), a.gammas.end(), c.gammas.begin()));
  EXPECT_TRUE(std::equal(a.points.begin(), a.points.end(), c.points.begin()));
  EXPECT_NE(a.points, d.points);
  EXPECT_EQ(a.seed, 9u);
  EXPECT_THROW(draw_series(ms, 0, 9), DomainError);
}

TEST(Measure, SignsAreRademacher) {
  const auto s = rademacher(100000, 4);
  long sum = 0;
  for (int v : s) {
    ASSERT_TRUE(v == 1 || v == -1);
    sum += v;
  }
  EXPECT_LT(std::labs(sum), 5 * std::sqrt(100000.0));
}

}  // namespace
