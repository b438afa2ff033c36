#include <gtest/gtest.h>

#include <cmath>

#include "ibody/body.hpp"
#include "ibody/error.hpp"
#include "ibody/numerics.hpp"
#include "ibody/random.hpp"
#include "ibody/sections.hpp"

using namespace ibody;

namespace {

double bump_of_angle(double t, double eps) {
  const double d = 2.0 * std::sin(std::abs(t) / 2.0);
  return d < eps ? 2.0 * std::exp(-d * d / (eps * eps - d * d)) : 0.0;
}

// Simpson over [-alpha, alpha] of f(s) |w(s)|.
template <class W>
double cap_integral(double eps, W weight) {
  const double alpha = 2.0 * std::asin(eps / 2.0);
  const int steps = 20000;
  const double h = 2.0 * alpha / steps;
  double s = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double t = -alpha + k * h;
    const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    s += w * bump_of_angle(t, eps) * weight(t);
  }
  return s * h / 3.0;
}

StarBody small_body(double eps) {
  BodyOptions opts;
  opts.grid.panel_nodes = 6;
  return construct_body(BumpParams(5, UnitVector::axis(5, 0), eps), opts);
}

SectionOptions small_options() {
  SectionOptions o;
  o.inner_grid.panel_nodes = 6;
  o.theta_samples = 8;
  return o;
}

}  // namespace

TEST(SubspaceFrame, BasisIsOrthonormalComplement) {
  Rng rng = make_stream(41, "test.sections");
  const UnitVector nrm = haar_unit_vector(rng, 6);
  const SubspaceFrame f = subspace_frame(nrm);
  EXPECT_EQ(f.basis.cols(), 5);
  EXPECT_LT((f.basis.transpose() * f.basis - Mat::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((f.basis.transpose() * nrm.vec()).norm(), 1e-13);
}

TEST(Restrict, BallSectionIsLowerDimensionalBall) {
  const StarBody ball = ball_body(6, 3.0);
  Rng rng = make_stream(42, "test.sections");
  const SubspaceFrame f = subspace_frame(haar_unit_vector(rng, 6));
  const StarBody s = section_restrict(ball, f);
  EXPECT_EQ(s.n, 5);
  EXPECT_NEAR(s.rho_min, 3.0, 1e-12);
  EXPECT_NEAR(s.rho_max, 3.0, 1e-12);
}

TEST(Restrict, AgreesWithAmbientRadial) {
  const StarBody b = small_body(0.3);
  Rng rng = make_stream(43, "test.sections");
  const SubspaceFrame f = subspace_frame(haar_unit_vector(rng, 5));
  const StarBody s = section_restrict(b, f);
  for (int t = 0; t < 10; ++t) {
    const Vec u = haar_unit_vector(rng, 4).vec();
    EXPECT_NEAR(s.rho(u), b.rho(f.basis * u), 1e-12);
  }
}

TEST(Deficit, NormalAtPole) {
  // every great circle through the normal meets both caps at its ends
  const double eps = 0.3;
  const BumpParams p(5, UnitVector::axis(5, 0), eps);
  const SubspaceFrame f = subspace_frame(UnitVector::axis(5, 0));
  const double expected = cap_integral(eps, [](double t) { return std::abs(std::sin(t)) * std::abs(std::sin(t)); });
  EXPECT_NEAR(deficit(p, f, UnitVector::axis(5, 2), 64), expected, 1e-9);
}

TEST(Deficit, NormalPerpendicularToPole) {
  // theta orthogonal to x0 lets the circle pass through x0 at its midpoint
  const double eps = 0.3;
  const BumpParams p(5, UnitVector::axis(5, 0), eps);
  const SubspaceFrame f = subspace_frame(UnitVector::axis(5, 1));
  const double expected = cap_integral(eps, [](double t) { return std::pow(std::cos(t), 2); });
  EXPECT_NEAR(deficit(p, f, UnitVector::axis(5, 3), 64), expected, 1e-8);
  EXPECT_LT(deficit(p, f, UnitVector::axis(5, 0), 64), expected);
}

TEST(Deficit, ScalesLinearlyInEps) {
  const SubspaceFrame f = subspace_frame(UnitVector::axis(5, 1));
  const double d1 = deficit(BumpParams(5, UnitVector::axis(5, 0), 0.1), f, UnitVector::axis(5, 3), 64);
  const double d2 = deficit(BumpParams(5, UnitVector::axis(5, 0), 0.05), f, UnitVector::axis(5, 3), 64);
  EXPECT_NEAR(std::log(d1 / d2) / std::log(2.0), 1.0, 0.05);
}

TEST(Deficit, RejectsThetaOutsideSubspace) {
  const BumpParams p(5, UnitVector::axis(5, 0), 0.3);
  const SubspaceFrame f = subspace_frame(UnitVector::axis(5, 1));
  EXPECT_THROW(deficit(p, f, UnitVector::axis(5, 1), 64), Error);
}

TEST(SectionCertificate, PreimageIsBaselineMinusDeficit) {
  const StarBody b = small_body(0.3);
  const SubspaceFrame f = subspace_frame(UnitVector::axis(5, 1));
  const SectionCertificate c = section_certificate(b, f, small_options(), 5);
  EXPECT_EQ(c.inner.verdict, Verdict::Intersection);
  EXPECT_NEAR(c.baseline, sin_power_integral(2), 1e-15);
  EXPECT_GT(c.deficit_max, 0.0);
  EXPECT_NEAR(c.inner.min_preimage, c.baseline - c.deficit_max, 0.02);
}

TEST(SectionScan, IncludesExtremalFramesAndSortsWorstFirst) {
  const StarBody b = small_body(0.3);
  const auto certs = section_scan(b, 3, 11, small_options());
  ASSERT_EQ(certs.size(), 5u);
  int extremal = 0;
  for (std::size_t k = 0; k < certs.size(); ++k) {
    extremal += certs[k].kind != "haar";
    EXPECT_EQ(certs[k].inner.verdict, Verdict::Intersection);
    if (k > 0) EXPECT_LE(certs[k - 1].inner.min_preimage, certs[k].inner.min_preimage);
  }
  EXPECT_EQ(extremal, 2);
}
