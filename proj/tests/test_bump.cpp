#include <gtest/gtest.h>

#include <cmath>

#include "ibody/bump.hpp"
#include "ibody/error.hpp"
#include "ibody/random.hpp"

using namespace ibody;

namespace {

// Unit vector at angle t from e1 towards e2.
Vec at_angle(int n, double t) {
  Vec x = Vec::Zero(n);
  x(0) = std::cos(t);
  x(1) = std::sin(t);
  return x;
}

}  // namespace

TEST(Bump, PeakValueIsTwo) {
  const BumpParams p(5, UnitVector::axis(5, 0), 0.3);
  EXPECT_DOUBLE_EQ(bump_eval(p, Vec::Unit(5, 0)), 2.0);
  EXPECT_DOUBLE_EQ(bump_eval(p, -Vec::Unit(5, 0)), 2.0);
}

TEST(Bump, MatchesClosedFormInsideCap) {
  const double eps = 0.4;
  const BumpParams p(5, UnitVector::axis(5, 0), eps);
  for (double t : {0.05, 0.1, 0.2, 0.3, 0.38}) {
    const double d = 2.0 * std::sin(t / 2.0);  // chordal distance
    if (d >= eps) continue;
    const double expected = 2.0 * std::exp(-d * d / (eps * eps - d * d));
    EXPECT_NEAR(bump_eval(p, at_angle(5, t)), expected, 1e-14);
    EXPECT_NEAR(bump_eval(p, -at_angle(5, t)), expected, 1e-14);
  }
}

TEST(Bump, VanishesOutsideCaps) {
  const double eps = 0.2;
  const BumpParams p(5, UnitVector::axis(5, 0), eps);
  const double edge = 2.0 * std::asin(eps / 2.0);
  EXPECT_EQ(bump_eval(p, at_angle(5, edge + 1e-9)), 0.0);
  EXPECT_EQ(bump_eval(p, at_angle(5, 1.5)), 0.0);
  EXPECT_FALSE(bump_support(p, at_angle(5, edge + 1e-9)));
  EXPECT_TRUE(bump_support(p, at_angle(5, edge - 1e-6)));
  EXPECT_NEAR(p.cap_angle(), edge, 1e-15);
  EXPECT_NEAR(p.cap_cos(), std::cos(edge), 1e-15);
}

TEST(Bump, EvenAndBounded) {
  Rng rng = make_stream(3, "test.bump");
  const BumpParams p(6, haar_unit_vector(rng, 6), 0.5);
  for (int i = 0; i < 500; ++i) {
    const Vec x = haar_unit_vector(rng, 6).vec();
    const double v = bump_eval(p, x);
    EXPECT_EQ(v, bump_eval(p, -x));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 2.0);
  }
}

TEST(Bump, RejectsInvalidParameters) {
  EXPECT_THROW(BumpParams(4, UnitVector::axis(4, 0), 0.1), Error);
  EXPECT_THROW(BumpParams(5, UnitVector::axis(5, 0), 0.0), Error);
  EXPECT_THROW(BumpParams(5, UnitVector::axis(5, 0), 1.0), Error);
  EXPECT_THROW(BumpParams(5, UnitVector::axis(6, 0), 0.1), Error);
}
