#include "ibody/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ibody/error.hpp"

namespace ibody {

SupResult transform_sup(const BumpParams& p, const SphereGrid& grid, const BodyOptions& options) {
  if (grid.dim() != p.n) fail(ErrorKind::Domain, "transform_sup: dimension mismatch");
  SupResult best{-1.0, -1, Vec()};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = perturbation(p, UnitVector(Vec(grid.node(i))), options);
    if (v > best.value) best = SupResult{v, static_cast<int>(i), Vec()};
  }
  return best;
}

namespace {

double derivative(const BumpParams& p, const Vec& x, const Vec& tau, int order, double h, double center,
                  const BodyOptions& options) {
  const double plus = perturbation(p, UnitVector(Vec(std::cos(h) * x + std::sin(h) * tau)), options);
  const double minus = perturbation(p, UnitVector(Vec(std::cos(h) * x - std::sin(h) * tau)), options);
  return order == 1 ? (plus - minus) / (2.0 * h) : (plus - 2.0 * center + minus) / (h * h);
}

}  // namespace

SupResult directional_derivative_sup(const BumpParams& p, const SphereGrid& grid, int order, double h,
                                     const BodyOptions& options) {
  if (order != 1 && order != 2) fail(ErrorKind::Config, "directional_derivative_sup: order must be 1 or 2");
  if (!(h > 0.0) || h > p.eps / 20.0) fail(ErrorKind::Config, "directional_derivative_sup: step must be <= eps/20");
  if (grid.dim() != p.n) fail(ErrorKind::Domain, "directional_derivative_sup: dimension mismatch");
  SupResult best{-1.0, -1, Vec()};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec x = grid.node(i);
    const double center = order == 2 ? perturbation(p, UnitVector(x), options) : 0.0;
    const Mat tangents = grid.coordinate_tangents(i);
    for (Eigen::Index k = 0; k < tangents.cols(); ++k) {
      const double v = std::abs(derivative(p, x, tangents.col(k), order, h, center, options));
      if (v > best.value) best = SupResult{v, static_cast<int>(i), tangents.col(k)};
    }
  }
  return best;
}

namespace {

SlopeFits fit_slopes(const std::vector<double>& eps, const std::vector<double>& values) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    lx.push_back(std::log(eps[k]));
    ly.push_back(std::log(values[k]));
  }
  SlopeFits f;
  f.all = fit_line(lx, ly);
  const std::size_t tail = lx.size() - 3;
  f.smallest = fit_line(std::span<const double>(lx).subspan(tail), std::span<const double>(ly).subspan(tail));
  f.use_smallest = f.all.rms_residual > 0.05;
  return f;
}

}  // namespace

ScalingExperiment scaling_experiment(int n, const std::vector<double>& ladder, const ScalingOptions& options) {
  if (ladder.size() < 4) fail(ErrorKind::Config, "scaling_experiment: ladder needs >= 4 rungs");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0 && ladder[k] < 1.0)) fail(ErrorKind::Config, "scaling_experiment: eps must lie in (0, 1)");
    if (k > 0 && !(ladder[k] < ladder[k - 1])) fail(ErrorKind::Config, "scaling_experiment: ladder must decrease");
  }
  ScalingExperiment ex;
  ex.n = n;
  ex.eps = ladder;
  for (double eps : ladder) {
    const BumpParams p(n, UnitVector::axis(n, 0), eps);
    const SphereGrid grid = graded_sphere_grid(n, p.x0, p.cap_angle(), options.body.grid, options.body.grid_cap);
    const double h = options.step_fraction * eps;
    ex.sup.push_back(transform_sup(p, grid, options.body).value);
    ex.grad.push_back(directional_derivative_sup(p, grid, 1, h, options.body).value);
    const SupResult hess = directional_derivative_sup(p, grid, 2, h, options.body);
    ex.hess.push_back(hess.value);

    // cross-check at the smallest rung (the last one overwrites)
    if (eps == ladder.back()) {
      const Vec x = grid.node(static_cast<std::size_t>(hess.node));
      const double lap_h = std::clamp(eps / 40.0, 1e-5, 1e-2);
      auto pert = [&](const Vec& y) { return perturbation(p, UnitVector(y), options.body); };
      auto bump = [&](const Vec& y) { return bump_eval(p, y); };
      FocusedRuleOptions o;
      o.panel_nodes = options.body.bump_panel_nodes;
      o.transverse_resolution = options.body.bump_transverse;
      // Delta_S f is supported in the same caps as f
      o.support_cos = p.cap_cos();
      const double breaks[] = {0.5 * p.cap_angle()};
      const SubsphereRule rule = focused_subsphere_rule(UnitVector(x), p.x0.vec(), breaks, o);
      const double transformed =
          std::numbers::pi * integrate_subsphere([&](const Vec& y) { return spherical_laplacian(bump, y, lap_h); }, rule);
      LaplacianCheck c;
      c.eps = eps;
      c.direction = x;
      c.second_derivative = derivative(p, x, hess.direction, 2, h, pert(x), options.body);
      c.laplacian_fd = spherical_laplacian(pert, x, lap_h);
      c.laplacian_transform = transformed;
      c.relative_gap = std::abs(hess.value - std::abs(transformed)) / hess.value;
      ex.laplacian = c;
    }
  }
  std::vector<double> corrected;
  for (std::size_t k = 0; k < ladder.size(); ++k) corrected.push_back(ex.grad[k] / std::abs(std::log(ladder[k])));
  ex.sup_fit = fit_slopes(ladder, ex.sup);
  ex.grad_fit = fit_slopes(ladder, ex.grad);
  ex.grad_corrected_fit = fit_slopes(ladder, corrected);
  ex.hess_fit = fit_slopes(ladder, ex.hess);
  return ex;
}

}  // namespace ibody
