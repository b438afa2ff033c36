#pragma once

// Geometry and quadrature on S^{n-1}: orthonormal frames, product rules on
// spheres and great subspheres, antipodally paired product-angle grids with
// tensor interpolation, and a finite-difference Laplace-Beltrami operator.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace ibody {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A point of S^{n-1}. Construction normalizes; zero or non-finite input is a
/// domain error.
class UnitVector {
 public:
  explicit UnitVector(Vec v);
  static UnitVector axis(int n, int i);

  const Vec& vec() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_(i); }
  UnitVector operator-() const;

 private:
  struct Trusted {};
  UnitVector(Vec v, Trusted) : v_(std::move(v)) {}
  Vec v_;
};

/// Real function on the sphere; receives unit vectors.
using SphereFunction = std::function<double(const Vec&)>;

struct HyperplaneBasis {
  UnitVector anchor;
  Mat basis;  // n x (n-1), columns span anchor-perp
};

/// n x n orthonormal frame whose first column is x (Householder reflection
/// of the standard frame). x and -x yield the same remaining columns.
Mat complete_frame(const Vec& x);

/// n x n orthonormal frame with columns 0, 1 equal to x, y (y must be a unit
/// vector orthogonal to x).
Mat complete_frame(const Vec& x, const Vec& y);

HyperplaneBasis orthonormal_basis(const UnitVector& x);

/// Quadrature on S^{m-1} in R^m; points stored column-wise.
struct SphereRule {
  Mat points;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

/// Product rule on S^{m-1}: Gauss-Jacobi in the cosine of each polar angle
/// (resolution nodes each) and 2*resolution equispaced azimuths. m = 1 gives
/// the two-point sphere {+1, -1}.
SphereRule product_sphere_rule(int m, int resolution);

/// Quadrature nodes on the great subsphere S^{n-1} cap anchor-perp.
struct SubsphereRule {
  UnitVector anchor;
  Mat nodes;  // n x Q
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

/// Product rule on S^{n-2} embedded in x-perp via orthonormal_basis(x).
/// Exact for polynomials of total degree <= resolution - 1.
SubsphereRule subsphere_rule(const UnitVector& x, int resolution);

struct FocusedRuleOptions {
  int panel_nodes = 16;
  int transverse_resolution = 2;
  double max_panel_width = 1.0;
  // When set, only the region where |(theta, focus)| > support_cos is kept.
  double support_cos = std::numeric_limits<double>::quiet_NaN();
};

/// Subsphere rule on x-perp whose polar axis is the projection of `focus`
/// onto x-perp. `focus_breaks` are angles (from focus) at which the integrand
/// has structure; they become polar panel boundaries, so integrands that are
/// piecewise smooth in the focus angle are integrated to panel-rule accuracy.
SubsphereRule focused_subsphere_rule(const UnitVector& x, const Vec& focus,
                                     std::span<const double> focus_breaks,
                                     const FocusedRuleOptions& options);

/// Sum of w_i f(theta_i) in fixed pairwise order.
double integrate_subsphere(const SphereFunction& f, const SubsphereRule& rule);

/// Laplace-Beltrami operator by the ambient central-difference Laplacian of
/// the degree-0 extension f(x / |x|). Requires 1e-5 <= h <= 1e-2.
double spherical_laplacian(const SphereFunction& f, const Vec& theta, double h);

// ---------------------------------------------------------------------------
// Product-angle grids

/// One polar coordinate (range [0, pi]) discretized by panels.
struct PolarAxis {
  std::vector<double> bounds;   // panel boundaries, ascending, bounds.front() = 0, back() = pi
  std::vector<int> offsets;     // first node index of each panel; offsets.back() = size
  std::vector<double> angles;   // ascending, mirror symmetric about pi/2
  std::vector<double> weights;  // include the sin^k Jacobian of the axis
  int size() const { return static_cast<int>(angles.size()); }
  int panels() const { return static_cast<int>(bounds.size()) - 1; }
};

class SphereGrid {
 public:
  SphereGrid(int dim, Mat frame, std::vector<PolarAxis> polar, int azimuth_count, std::size_t cap);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  const Mat& frame() const { return frame_; }
  const Mat& nodes() const { return nodes_; }  // dim x N
  auto node(std::size_t i) const { return nodes_.col(static_cast<Eigen::Index>(i)); }
  std::span<const double> weights() const { return weights_; }
  const std::vector<int>& antipode() const { return antipode_; }
  /// Nodes i with i < antipode(i), in increasing order; they index the even subspace.
  const std::vector<int>& representatives() const { return representatives_; }
  int even_slot(std::size_t node) const { return even_slot_[node]; }
  const std::vector<PolarAxis>& polar_axes() const { return polar_; }
  int azimuth_count() const { return azimuth_; }
  std::uint64_t hash() const { return hash_; }

  /// Hyperspherical angles (polar..., azimuth) of a unit vector in the grid frame.
  std::vector<double> angles_of(const Vec& theta) const;
  /// Tensor-product interpolation weights at theta: pairs (node index, weight).
  void interpolation_weights(const Vec& theta, std::vector<std::pair<int, double>>& out) const;
  /// Interior panel boundaries of the leading polar axis.
  std::vector<double> polar_breaks() const;
  /// Local step of the leading polar axis at a node (largest adjacent gap).
  double polar_spacing(std::size_t node) const;
  /// Unit tangent vectors along each coordinate line through a node (dim x (dim-1)).
  Mat coordinate_tangents(std::size_t node) const;

  Vec sample(const SphereFunction& f) const;

 private:
  std::vector<int> multi_index(std::size_t node) const;

  int dim_;
  Mat frame_;
  std::vector<PolarAxis> polar_;
  int azimuth_;
  Mat nodes_;
  std::vector<double> weights_;
  std::vector<int> antipode_;
  std::vector<int> representatives_;
  std::vector<int> even_slot_;
  std::uint64_t hash_ = 0;
};

inline constexpr std::size_t kDefaultGridCap = 200000;

/// Uniform product grid with the standard frame: Gauss-Jacobi polar axes with
/// `resolution` nodes each (rounded up to even) and 2*resolution azimuths.
SphereGrid sphere_grid(int n, int resolution, std::size_t cap = kDefaultGridCap);

struct GradedGridSpec {
  int panel_nodes = 8;      // nodes per leading-axis panel
  int cap_panels = 2;       // panels on [0, alpha]
  int band_panels = 2;      // panels on [pi/2 - alpha, pi/2]
  double max_mid_panel = 0.6;
  int transverse = 2;       // nodes per transverse polar axis
  int azimuth = 4;          // azimuth count (even)
};

/// Product grid whose leading polar axis points at `pole` and is refined on
/// the caps of angular radius `feature_angle` around +-pole and on the
/// equatorial band of the same half-width.
SphereGrid graded_sphere_grid(int n, const UnitVector& pole, double feature_angle,
                              const GradedGridSpec& spec, std::size_t cap = kDefaultGridCap);

}  // namespace ibody
