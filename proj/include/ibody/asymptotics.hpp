#pragma once

// Scaling of the perturbation P(x) = pi * integral of f_eps over x-perp and
// of its first and second derivatives along great circles, as eps -> 0.

#include <vector>

#include "ibody/body.hpp"
#include "ibody/numerics.hpp"

namespace ibody {

struct SupResult {
  double value = 0.0;
  int node = -1;
  Vec direction;  // tangent for derivative sups, empty otherwise
};

/// max over grid nodes of P.
SupResult transform_sup(const BumpParams& p, const SphereGrid& grid, const BodyOptions& options = {});

/// max over grid nodes and coordinate tangents of |d^order/dt^order P(cos t x + sin t tau)|
/// at t = 0, by central differences with step h. Requires h <= eps / 20 and
/// order 1 or 2.
SupResult directional_derivative_sup(const BumpParams& p, const SphereGrid& grid, int order, double h,
                                     const BodyOptions& options = {});

struct SlopeFits {
  LineFit all;       // every rung
  LineFit smallest;  // three smallest eps
  bool use_smallest = false;  // all.rms_residual > 0.05
  double slope() const { return use_smallest ? smallest.slope : all.slope; }
};

struct LaplacianCheck {
  double eps = 0.0;
  Vec direction;             // worst second-derivative node
  double second_derivative;  // FD value there (signed, along the worst tangent)
  double laplacian_fd;       // Delta_S P by ambient differences of P
  double laplacian_transform;// pi * integral over x-perp of Delta_S f_eps
  double relative_gap;       // |hess_sup - |laplacian_transform|| / hess_sup
};

struct ScalingExperiment {
  int n = 0;
  std::vector<double> eps;
  std::vector<double> sup, grad, hess;
  SlopeFits sup_fit, grad_fit, grad_corrected_fit, hess_fit;
  LaplacianCheck laplacian;
};

struct ScalingOptions {
  BodyOptions body;
  double step_fraction = 1.0 / 40.0;  // h = step_fraction * eps
};

/// Requires a strictly decreasing ladder of >= 4 values in (0, 1).
ScalingExperiment scaling_experiment(int n, const std::vector<double>& ladder, const ScalingOptions& options = {});

}  // namespace ibody
