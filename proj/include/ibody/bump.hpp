#pragma once

#include "ibody/sphere.hpp"

namespace ibody {

/// Parameters of the even bump f_eps: two chordal caps of radius eps around
/// +-x0 on S^{n-1}. Requires n >= 5 and 0 < eps < 1 (disjoint caps).
struct BumpParams {
  int n;
  UnitVector x0;
  double eps;

  BumpParams(int n, UnitVector x0, double eps);

  /// Angular radius of each cap: 2 asin(eps / 2).
  double cap_angle() const;
  /// Cosine threshold: x lies in a cap iff |(x, x0)| > cap_cos().
  double cap_cos() const { return 1.0 - 0.5 * eps * eps; }
};

/// f_eps(x) = 2 exp(-d^2 / (eps^2 - d^2)) with d the chordal distance to the
/// nearer pole; 0 outside both caps. Values below 1e-300 are flushed to 0.
double bump_eval(const BumpParams& p, const Eigen::Ref<const Vec>& x);

/// True iff |x - x0| < eps or |x + x0| < eps.
bool bump_support(const BumpParams& p, const Eigen::Ref<const Vec>& x);

}  // namespace ibody
