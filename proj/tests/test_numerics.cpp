#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ibody/error.hpp"
#include "ibody/numerics.hpp"

using namespace ibody;
constexpr double kPi = std::numbers::pi;

TEST(Gamma, IntegerAndHalfIntegerValues) {
  EXPECT_NEAR(ibody::gamma(1.0), 1.0, 1e-15);
  EXPECT_NEAR(ibody::gamma(5.0), 24.0, 24.0 * 1e-14);
  EXPECT_NEAR(ibody::gamma(0.5), std::sqrt(kPi), 1e-14);
  EXPECT_NEAR(ibody::gamma(2.5), 0.75 * std::sqrt(kPi), 1e-14);
}

TEST(Gamma, RecurrenceHolds) {
  for (double x = 0.5; x < 20.0; x += 0.37) EXPECT_NEAR(ibody::gamma(x + 1.0) / (x * ibody::gamma(x)), 1.0, 1e-13) << x;
}

TEST(Gamma, RejectsNonPositive) {
  EXPECT_THROW(ibody::gamma(0.0), Error);
  EXPECT_THROW(ibody::gamma(-1.5), Error);
  EXPECT_THROW(ibody::gamma(std::nan("")), Error);
}

TEST(SphereArea, LowDimensions) {
  EXPECT_NEAR(sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(sphere_area(2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(4), 2.0 * kPi * kPi, 1e-13);
  EXPECT_NEAR(sphere_area(5), 8.0 * kPi * kPi / 3.0, 1e-13);
}

TEST(SphereArea, MatchesRecursion) {
  // |S^{d+1}| = 2 pi / d * |S^{d-1}|
  for (int d = 2; d < 15; ++d) EXPECT_NEAR(sphere_area(d + 2), 2.0 * kPi / d * sphere_area(d), 1e-12 * sphere_area(d));
}

TEST(Cn, FiveDimensionalValue) {
  EXPECT_NEAR(c_n(5), 2.0 * kPi * kPi * kPi, 1e-12);
  EXPECT_NEAR(c_n(6), kPi * 8.0 * kPi * kPi / 3.0, 1e-12 * c_n(6));
}

TEST(Cn, IsPiTimesSubsphereArea) {
  for (int n = 3; n < 13; ++n) EXPECT_NEAR(c_n(n), kPi * sphere_area(n - 1), 1e-12 * c_n(n)) << n;
}

TEST(SinPowerIntegral, WallisValues) {
  EXPECT_NEAR(sin_power_integral(0), kPi, 1e-15);
  EXPECT_NEAR(sin_power_integral(1), 2.0, 1e-15);
  EXPECT_NEAR(sin_power_integral(2), kPi / 2.0, 1e-15);
  EXPECT_NEAR(sin_power_integral(3), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(sin_power_integral(4), 3.0 * kPi / 8.0, 1e-15);
}

TEST(SinPowerIntegral, RelatesSphereAreas) {
  for (int d = 2; d < 12; ++d)
    EXPECT_NEAR(sphere_area(d + 1), sphere_area(d) * sin_power_integral(d - 1), 1e-12 * sphere_area(d + 1));
}

TEST(GaussLegendre, ExactForPolynomials) {
  const auto rule = gauss_legendre(10, 0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
    EXPECT_NEAR(s, std::pow(2.0, k + 1) / (k + 1), 1e-12 * std::pow(2.0, k + 1)) << k;
  }
}

TEST(GaussJacobi, WeightsIntegrateTheJacobiWeight) {
  // integral of (1-t)^a (1+t)^b = 2^{a+b+1} B(a+1, b+1)
  for (double a : {0.0, 0.5, 1.0}) {
    for (double b : {0.0, 1.0, 2.5}) {
      const auto rule = gauss_jacobi(8, a, b);
      double s = 0.0;
      for (double w : rule.weights) s += w;
      const double exact = std::pow(2.0, a + b + 1) * ibody::gamma(a + 1) * ibody::gamma(b + 1) / ibody::gamma(a + b + 2);
      EXPECT_NEAR(s, exact, 1e-13 * exact);
    }
  }
}

TEST(GaussJacobi, NodesAscendingInsideInterval) {
  const auto rule = gauss_jacobi(12, 1.0, 3.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    EXPECT_GT(rule.nodes[i], -1.0);
    EXPECT_LT(rule.nodes[i], 1.0);
    if (i > 0) EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
  }
}

TEST(GaussJacobi, SineWeightedMoment) {
  // with t = cos(phi): integral of cos^2 phi sin^3 phi dphi over [0, pi] = 4/15
  const auto rule = gauss_jacobi(6, 1.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
  EXPECT_NEAR(s, 4.0 / 15.0, 1e-14);
}

TEST(GaussJacobi, RejectsBadArguments) {
  EXPECT_THROW(gauss_jacobi(0, 0.0, 0.0), Error);
  EXPECT_THROW(gauss_jacobi(4, -1.0, 0.0), Error);
}

TEST(PairwiseSum, MatchesNaiveOnSmallIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v), 999.0 * 1000.0 / 2.0);
  EXPECT_EQ(pairwise_sum({}), 0.0);
}

TEST(FitLine, RecoversExactLine) {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.rms_residual, 0.0, 1e-14);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}
