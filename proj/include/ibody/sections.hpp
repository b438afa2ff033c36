#pragma once

// Hyperplane sections K cap V: the restricted radial function, the
// (n-1)-dimensional Funk certificate inside V, and the great-circle deficit
// integral of the bump that must stay below the Wallis baseline.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ibody/body.hpp"
#include "ibody/radon.hpp"

namespace ibody {

struct SubspaceFrame {
  UnitVector normal;
  Mat basis;  // n x (n-1), orthonormal, spans normal-perp
};

SubspaceFrame subspace_frame(const UnitVector& normal);

struct SectionOptions {
  GradedGridSpec inner_grid;
  FunkOptions funk;
  int theta_samples = 64;   // random theta per frame for the deficit maximum
  int deficit_nodes = 64;   // Gauss-Legendre nodes per support interval
  std::optional<std::filesystem::path> cache_dir;
};

/// The (n-1)-dimensional body with radial function u -> rho(basis * u).
/// Its grid is graded around the projection of the body pole onto V.
StarBody section_restrict(const StarBody& b, const SubspaceFrame& frame, const GradedGridSpec& spec = {});

/// max over unit xi in V cap theta-perp of
///   int_0^pi f_eps(normal cos phi + xi sin phi) sin^{n-3} phi dphi.
double deficit(const BumpParams& p, const SubspaceFrame& frame, const UnitVector& theta, int nodes = 64);

struct SectionCertificate {
  std::string kind;          // "normal_x0", "normal_perp_x0" or "haar"
  int frame_id = -1;
  SubspaceFrame frame;
  IntersectionCertificate inner;
  double deficit_max = 0.0;
  Vec deficit_theta;         // theta attaining deficit_max (ambient coordinates)
  double baseline = 0.0;     // integral of sin^{n-3} over [0, pi]
  double feature_angle = 0.0;
  std::uint64_t grid_hash = 0;
  std::size_t grid_nodes = 0;
};

SectionCertificate section_certificate(const StarBody& b, const SubspaceFrame& frame, const SectionOptions& options,
                                       std::uint64_t seed);

/// Frames with normal x0 and normal perpendicular to x0, then num_subspaces
/// Haar-random normals. Sorted worst first: by verdict (not_intersection,
/// inconclusive, intersection), then by inner.min_preimage.
std::vector<SectionCertificate> section_scan(const StarBody& b, int num_subspaces, std::uint64_t seed,
                                             const SectionOptions& options = {});

}  // namespace ibody
