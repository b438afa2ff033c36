#pragma once

// Planar convexity test: a star body is convex iff for every central
// 2-plane the section profile rho(phi) satisfies
// J = 2 rho'^2 - rho'' rho + rho^2 > 0.

#include <cstdint>
#include <functional>
#include <vector>

#include "ibody/body.hpp"

namespace ibody {

struct PlaneSectionProfile {
  Vec xi1, xi2;               // orthonormal basis of the plane
  std::vector<double> angles; // phi_i = 2 pi i / m
  Vec rho;                    // rho(xi1 cos phi_i + xi2 sin phi_i)
};

/// Samples rho along the great circle spanned by xi1, xi2. Requires
/// orthonormal xi1, xi2 and an even m >= 64.
PlaneSectionProfile section_profile(const StarBody& b, const UnitVector& xi1, const UnitVector& xi2, int m);

/// Profile of a planar curve given directly as rho(phi) (basis e1, e2).
PlaneSectionProfile synthetic_profile(const std::function<double(double)>& rho, int m);

struct CurvatureSamples {
  Vec d1, d2, j;  // rho', rho'', J at each angle
};

/// Fourth-order periodic central differences.
CurvatureSamples curvature_functional(const PlaneSectionProfile& p);

struct ConvexityCertificate {
  double j_min = 0.0;
  Vec worst_xi1, worst_xi2;
  double worst_angle = 0.0;
  int worst_plane = -1;
  bool worst_is_axial = false;
  int num_planes = 0;   // random planes
  int num_axial = 0;
  int m = 0;
  std::uint64_t seed = 0;
};

/// Receives every scanned plane (random planes first, then axial ones).
using ConvexitySink = std::function<void(int plane, const PlaneSectionProfile&, const CurvatureSamples&)>;

/// max(256, ceil(64 pi / eps)) rounded up to a multiple of 4.
int default_angle_count(double eps);

/// J_min over num_planes Haar-random planes and the n-1 planes through the
/// body pole spanned with the pole's frame vectors.
ConvexityCertificate convexity_scan(const StarBody& b, int num_planes, int m, std::uint64_t seed,
                                    const ConvexitySink& sink = {});

}  // namespace ibody
