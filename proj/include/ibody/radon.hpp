#pragma once

// Spherical Radon (Funk) transform R g(xi) = integral of g over the great
// subsphere S^{n-1} cap xi-perp, its discretization on antipodally paired
// grids, truncated-SVD inversion and the sign certificate for intersection
// bodies (rho = pi R g with g >= 0).

#include <Eigen/SVD>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "ibody/sphere.hpp"

namespace ibody {

/// Values on the nodes of a grid.
struct GridFunction {
  std::shared_ptr<const SphereGrid> grid;
  Vec values;

  static GridFunction sample(std::shared_ptr<const SphereGrid> grid, const SphereFunction& f);
  Vec even_part() const;
  Vec odd_part() const;
};

/// Subsphere quadrature of g over S^{n-1} cap xi-perp (no leading pi).
double funk_apply(const SphereFunction& g, const UnitVector& xi, int resolution);

struct FunkOptions {
  int resolution = 0;                  // subsphere panel nodes; 0 = largest grid panel + 8
  int transverse_resolution = 4;
  double max_panel_width = 1.0;
  std::size_t even_cap = 4000;
  double cutoff = 1e-6;                // TSVD: drop sigma < cutoff * sigma_max
};

/// Discrete Funk transform acting on even grid functions. Stores the
/// even-subspace block: entry (i, j) is the weight of representative node j
/// (together with its antipode) in the subsphere integral at representative i.
class FunkOperator {
 public:
  FunkOperator(std::shared_ptr<const SphereGrid> grid, Mat even_matrix, int resolution, double cutoff);

  const SphereGrid& grid() const { return *grid_; }
  const std::shared_ptr<const SphereGrid>& grid_ptr() const { return grid_; }
  const Mat& even_matrix() const { return matrix_; }
  int resolution() const { return resolution_; }
  double cutoff() const { return cutoff_; }

  /// Even part of a full grid vector, one value per representative.
  Vec fold(const Vec& full) const;
  /// Even full-grid vector from representative values.
  Vec unfold(const Vec& even) const;
  /// R applied to a full grid vector (odd components are annihilated).
  Vec apply(const Vec& full) const;

  /// Square roots of the grid weights of the representatives.
  const Vec& balance() const { return balance_; }
  /// SVD of the L2-balanced block diag(balance) * even_matrix * diag(balance)^-1,
  /// the matrix of R between weighted-l2 coordinates.
  const Eigen::BDCSVD<Mat>& svd() const;

 private:
  struct SvdCache {
    std::once_flag once;
    std::unique_ptr<Eigen::BDCSVD<Mat>> svd;
  };
  std::shared_ptr<const SphereGrid> grid_;
  Mat matrix_;
  Vec balance_;
  int resolution_;
  double cutoff_;
  std::shared_ptr<SvdCache> cache_;
};

FunkOperator assemble_operator(std::shared_ptr<const SphereGrid> grid, const FunkOptions& options = {});

/// Same as assemble_operator, reusing a FUNK1 cache file under `cache_dir`
/// keyed by (n, resolution, grid hash) when present.
FunkOperator assemble_operator_cached(std::shared_ptr<const SphereGrid> grid, const FunkOptions& options,
                                      const std::optional<std::filesystem::path>& cache_dir);

std::filesystem::path operator_cache_path(const std::filesystem::path& dir, const SphereGrid& grid, int resolution);
void write_operator_cache(const std::filesystem::path& path, const FunkOperator& op);
/// Reads a FUNK1 file; nullopt when missing or when the header does not match.
std::optional<Mat> read_operator_cache(const std::filesystem::path& path, int n, std::size_t rows, int resolution);

struct InversionResult {
  Vec preimage;        // full grid vector (even)
  double residual = 0; // ||R g - rhs||_inf / ||rhs||_inf on the even part
  int rank = 0;
  bool inconclusive = false;
};

/// Truncated-SVD solution of R g = rhs in weighted-l2 coordinates; the odd
/// part of rhs is projected out.
InversionResult funk_invert(const FunkOperator& op, const Vec& rhs);

enum class Verdict { Intersection, NotIntersection, Inconclusive };
const char* to_string(Verdict v);

struct IntersectionCertificate {
  double min_preimage = 0.0;
  int argmin = -1;  // grid node
  Vec argmin_direction;
  double residual = 0.0;
  double residual_scale = 0.0;
  double max_abs_preimage = 0.0;
  int rank = 0;
  Verdict verdict = Verdict::Inconclusive;
  Vec preimage;
};

/// Solves pi R g = radial and classifies the sign of g.
IntersectionCertificate intersection_certificate(const FunkOperator& op, const Vec& radial);

}  // namespace ibody
