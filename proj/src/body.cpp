#include "ibody/body.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ibody/error.hpp"
#include "ibody/numerics.hpp"

namespace ibody {

double StarBody::radial(const Vec& x) const {
  const double r = x.norm();
  if (!(r > 0.0)) fail(ErrorKind::Domain, "StarBody::radial: zero vector");
  return rho(x / r) / r;
}

namespace {

FocusedRuleOptions bump_rule_options(const BumpParams& p, const BodyOptions& options) {
  FocusedRuleOptions o;
  o.panel_nodes = options.bump_panel_nodes;
  o.transverse_resolution = options.bump_transverse;
  o.support_cos = p.cap_cos();
  return o;
}

double perturbation_with(const BumpParams& p, const UnitVector& x, const FocusedRuleOptions& o) {
  const double breaks[] = {0.5 * p.cap_angle()};
  const SubsphereRule rule = focused_subsphere_rule(x, p.x0.vec(), breaks, o);
  std::vector<double> terms(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q)
    terms[q] = rule.weights[q] * bump_eval(p, rule.nodes.col(static_cast<Eigen::Index>(q)));
  return std::numbers::pi * pairwise_sum(terms);
}

}  // namespace

double perturbation(const BumpParams& p, const UnitVector& x, const BodyOptions& options) {
  if (x.dim() != p.n) fail(ErrorKind::Domain, "perturbation: dimension mismatch");
  return perturbation_with(p, x, bump_rule_options(p, options));
}

StarBody make_star_body(int n, SphereFunction rho, const UnitVector& pole, double feature_angle,
                        const GradedGridSpec& grid_spec, std::size_t cap) {
  StarBody b{n, std::nullopt, pole, feature_angle, std::move(rho), nullptr, Vec(), 0.0, 0.0};
  b.grid = std::make_shared<const SphereGrid>(graded_sphere_grid(n, pole, feature_angle, grid_spec, cap));
  b.sampled = b.grid->sample(b.rho);
  b.rho_min = b.sampled.minCoeff();
  b.rho_max = b.sampled.maxCoeff();
  if (!(b.rho_min > 0.0))
    fail(ErrorKind::Construction, "epsilon too large: radial function " + std::to_string(b.rho_min) +
                                      " is not positive on the grid");
  return b;
}

StarBody construct_body(const BumpParams& p, const BodyOptions& options) {
  const double cn = c_n(p.n);
  const FocusedRuleOptions o = bump_rule_options(p, options);
  SphereFunction rho = [p, o, cn](const Vec& x) { return cn - perturbation_with(p, UnitVector(x), o); };
  StarBody b = make_star_body(p.n, std::move(rho), p.x0, p.cap_angle(), options.grid, options.grid_cap);
  b.params = p;
  return b;
}

StarBody ball_body(int n, double radius, const GradedGridSpec& grid) {
  if (!(radius > 0.0)) fail(ErrorKind::Domain, "ball_body: radius must be positive");
  return make_star_body(n, [radius](const Vec&) { return radius; }, UnitVector::axis(n, 0), 0.3, grid);
}

double minkowski_norm(const StarBody& b, const Vec& x) {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  return r / b.rho(x / r);
}

}  // namespace ibody
