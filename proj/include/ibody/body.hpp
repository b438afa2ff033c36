#pragma once

// The star body K with rho_K(x) = C_n - P(x), P(x) = pi * integral of f_eps
// over the great subsphere x-perp, plus generic star bodies given by a radial
// evaluator (balls, synthetic test bodies, restrictions to subspaces).

#include <memory>
#include <optional>

#include "ibody/bump.hpp"
#include "ibody/sphere.hpp"

namespace ibody {

struct BodyOptions {
  GradedGridSpec grid;
  int bump_panel_nodes = 40;   // polar nodes per panel of the bump quadrature
  int bump_transverse = 2;
  std::size_t grid_cap = kDefaultGridCap;
};

struct StarBody {
  int n = 0;
  std::optional<BumpParams> params;
  UnitVector pole;              // grid pole (x0 for the counterexample)
  double feature_angle = 0.0;   // angular scale the grid resolves
  SphereFunction rho;           // unit x -> rho(x)
  std::shared_ptr<const SphereGrid> grid;
  Vec sampled;                  // rho on grid nodes
  double rho_min = 0.0;
  double rho_max = 0.0;

  /// rho(x / |x|) / |x| for nonzero x.
  double radial(const Vec& x) const;
};

/// P(x) = pi * integral over S^{n-1} cap x-perp of f_eps (>= 0).
double perturbation(const BumpParams& p, const UnitVector& x, const BodyOptions& options = {});

/// Builds a star body from a radial evaluator sampled on a graded grid.
/// Non-positive samples raise ErrorKind::Construction.
StarBody make_star_body(int n, SphereFunction rho, const UnitVector& pole, double feature_angle,
                        const GradedGridSpec& grid, std::size_t cap = kDefaultGridCap);

/// The counterexample body for the given bump.
StarBody construct_body(const BumpParams& p, const BodyOptions& options = {});

/// Euclidean ball of the given radius (the f = 0 case has radius C_n).
StarBody ball_body(int n, double radius, const GradedGridSpec& grid = {});

/// |x| / rho(x / |x|); 0 at the origin.
double minkowski_norm(const StarBody& b, const Vec& x);

}  // namespace ibody
