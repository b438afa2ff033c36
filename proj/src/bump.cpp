#include "ibody/bump.hpp"

#include <cmath>

#include "ibody/error.hpp"

namespace ibody {

BumpParams::BumpParams(int n_, UnitVector x0_, double eps_) : n(n_), x0(std::move(x0_)), eps(eps_) {
  if (n < 5) fail(ErrorKind::Domain, "BumpParams: dimension must be >= 5");
  if (x0.dim() != n) fail(ErrorKind::Domain, "BumpParams: pole dimension mismatch");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Domain, "BumpParams: eps must lie in (0, 1)");
}

double BumpParams::cap_angle() const { return 2.0 * std::asin(0.5 * eps); }

namespace {

double chord2_to_nearer_pole(const BumpParams& p, const Eigen::Ref<const Vec>& x) {
  const Vec& pole = p.x0.vec();
  // |x - s x0|^2 for the pole sign s maximizing s (x, x0)
  const double s = x.dot(pole) >= 0.0 ? 1.0 : -1.0;
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = x(i) - s * pole(i);
    d2 += d * d;
  }
  return d2;
}

}  // namespace

double bump_eval(const BumpParams& p, const Eigen::Ref<const Vec>& x) {
  const double d2 = chord2_to_nearer_pole(p, x);
  const double e2 = p.eps * p.eps;
  if (d2 >= e2) return 0.0;
  const double exponent = -d2 / (e2 - d2);
  if (exponent < -700.0) return 0.0;
  const double value = 2.0 * std::exp(exponent);
  return value < 1e-300 ? 0.0 : value;
}

bool bump_support(const BumpParams& p, const Eigen::Ref<const Vec>& x) { return chord2_to_nearer_pole(p, x) < p.eps * p.eps; }

}  // namespace ibody
