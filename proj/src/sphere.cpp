#include "ibody/sphere.hpp"

#include <Eigen/Householder>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ibody/error.hpp"
#include "ibody/numerics.hpp"

namespace ibody {

namespace {

constexpr double kPi = std::numbers::pi;

// Lagrange cardinal weights of `nodes` at x (product form; exact at nodes).
void lagrange_weights(std::span<const double> nodes, double x, std::span<double> out) {
  const std::size_t p = nodes.size();
  for (std::size_t k = 0; k < p; ++k) {
    double w = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (j != k) w *= (x - nodes[j]) / (nodes[k] - nodes[j]);
    }
    out[k] = w;
  }
}

// Trigonometric cardinal functions for M (even) equispaced nodes (k + 1/2) 2 pi / M.
void trig_weights(int m, double phi, std::span<double> out) {
  const int half = m / 2;
  for (int k = 0; k < m; ++k) {
    const double d = phi - (k + 0.5) * 2.0 * kPi / m;
    double s = 1.0 + std::cos(half * d);
    for (int j = 1; j < half; ++j) s += 2.0 * std::cos(j * d);
    out[k] = s / m;
  }
}

PolarAxis single_panel_axis(int count, int sin_power) {
  const double a = 0.5 * (sin_power - 1);
  const QuadratureRule1D rule = gauss_jacobi(count, a, a);
  PolarAxis axis;
  axis.bounds = {0.0, kPi};
  axis.offsets = {0, count};
  // t descending -> angle ascending
  for (int k = count - 1; k >= 0; --k) {
    axis.angles.push_back(std::acos(rule.nodes[k]));
    axis.weights.push_back(rule.weights[k]);
  }
  return axis;
}

PolarAxis paneled_axis(const std::vector<double>& half_bounds, int panel_nodes, int sin_power) {
  // half_bounds: 0 = b0 < ... < bk = pi/2; mirrored onto [pi/2, pi]
  PolarAxis axis;
  axis.bounds = half_bounds;
  for (auto it = half_bounds.rbegin() + 1; it != half_bounds.rend(); ++it) axis.bounds.push_back(kPi - *it);
  axis.bounds.back() = kPi;
  const int panels = static_cast<int>(half_bounds.size()) - 1;
  std::vector<double> half_angles, half_weights;
  // The panel touching the pole carries the theta^k factor of the Jacobian
  // in a Gauss-Jacobi rule, so node values there stay well determined.
  {
    const double b = half_bounds[1];
    const QuadratureRule1D rule = gauss_jacobi(panel_nodes, 0.0, sin_power);
    const double scale = std::pow(0.5 * b, sin_power + 1);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double theta = 0.5 * b * (1.0 + rule.nodes[k]);
      half_angles.push_back(theta);
      half_weights.push_back(rule.weights[k] * scale * std::pow(std::sin(theta) / theta, sin_power));
    }
  }
  for (int p = 1; p < panels; ++p) {
    const QuadratureRule1D rule = gauss_legendre(panel_nodes, half_bounds[p], half_bounds[p + 1]);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      half_angles.push_back(rule.nodes[k]);
      half_weights.push_back(rule.weights[k] * std::pow(std::sin(rule.nodes[k]), sin_power));
    }
  }
  axis.angles = half_angles;
  axis.weights = half_weights;
  for (std::size_t k = half_angles.size(); k-- > 0;) {
    axis.angles.push_back(kPi - half_angles[k]);
    axis.weights.push_back(half_weights[k]);
  }
  for (int p = 0; p <= 2 * panels; ++p) axis.offsets.push_back(p * panel_nodes);
  return axis;
}

}  // namespace

// ---------------------------------------------------------------------------

UnitVector::UnitVector(Vec v) {
  if (v.size() < 1 || !v.allFinite()) fail(ErrorKind::Domain, "UnitVector: non-finite or empty vector");
  const double norm = v.norm();
  if (norm == 0.0) fail(ErrorKind::Domain, "UnitVector: zero vector");
  v_ = v / norm;
}

UnitVector UnitVector::axis(int n, int i) {
  if (n < 1 || i < 0 || i >= n) fail(ErrorKind::Domain, "UnitVector::axis: index out of range");
  return UnitVector(Vec::Unit(n, i), Trusted{});
}

UnitVector UnitVector::operator-() const { return UnitVector(-v_, Trusted{}); }

Mat complete_frame(const Vec& x) {
  const Eigen::Index n = x.size();
  const double s = x(0) >= 0.0 ? 1.0 : -1.0;
  Vec v = x;
  v(0) += s;
  const double vv = v.squaredNorm();
  Mat frame(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    // H e_k with H = I - 2 v v^T / v^T v
    Vec col = Vec::Unit(n, k) - (2.0 * v(k) / vv) * v;
    frame.col(k) = col;
  }
  frame.col(0) = x;
  return frame;
}

Mat complete_frame(const Vec& x, const Vec& y) {
  const Eigen::Index n = x.size();
  Mat pair(n, 2);
  pair.col(0) = x;
  pair.col(1) = y;
  Eigen::HouseholderQR<Mat> qr(pair);
  Mat frame = qr.householderQ() * Mat::Identity(n, n);
  frame.col(0) = x;
  frame.col(1) = y;
  return frame;
}

HyperplaneBasis orthonormal_basis(const UnitVector& x) {
  if (x.dim() < 2) fail(ErrorKind::Domain, "orthonormal_basis: dimension must be >= 2");
  Mat frame = complete_frame(x.vec());
  return HyperplaneBasis{x, frame.rightCols(x.dim() - 1)};
}

SphereRule product_sphere_rule(int m, int resolution) {
  if (m < 1) fail(ErrorKind::Domain, "product_sphere_rule: m must be >= 1");
  if (resolution < 1) fail(ErrorKind::Config, "product_sphere_rule: resolution must be >= 1");
  SphereRule rule;
  if (m == 1) {
    rule.points = Mat(1, 2);
    rule.points << 1.0, -1.0;
    rule.weights = {1.0, 1.0};
    return rule;
  }
  if (m == 2) {
    const int count = 2 * resolution;
    rule.points = Mat(2, count);
    for (int k = 0; k < count; ++k) {
      const double phi = (k + 0.5) * 2.0 * kPi / count;
      rule.points(0, k) = std::cos(phi);
      rule.points(1, k) = std::sin(phi);
      rule.weights.push_back(2.0 * kPi / count);
    }
    return rule;
  }
  const double a = 0.5 * (m - 3);
  const QuadratureRule1D polar = gauss_jacobi(resolution, a, a);
  const SphereRule sub = product_sphere_rule(m - 1, resolution);
  rule.points = Mat(m, static_cast<Eigen::Index>(polar.size() * sub.size()));
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const double t = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t j = 0; j < sub.size(); ++j, ++col) {
      rule.points(0, col) = t;
      rule.points.col(col).tail(m - 1) = s * sub.points.col(static_cast<Eigen::Index>(j));
      rule.weights.push_back(polar.weights[i] * sub.weights[j]);
    }
  }
  return rule;
}

SubsphereRule subsphere_rule(const UnitVector& x, int resolution) {
  if (resolution < 4) fail(ErrorKind::Config, "subsphere_rule: resolution must be >= 4");
  if (x.dim() < 2) fail(ErrorKind::Domain, "subsphere_rule: dimension must be >= 2");
  const HyperplaneBasis basis = orthonormal_basis(x);
  const SphereRule local = product_sphere_rule(x.dim() - 1, resolution);
  return SubsphereRule{x, basis.basis * local.points, local.weights};
}

SubsphereRule focused_subsphere_rule(const UnitVector& x, const Vec& focus,
                                     std::span<const double> focus_breaks,
                                     const FocusedRuleOptions& options) {
  const int n = x.dim();
  if (n < 3) fail(ErrorKind::Domain, "focused_subsphere_rule: dimension must be >= 3");
  if (options.panel_nodes < 1 || options.transverse_resolution < 1)
    fail(ErrorKind::Config, "focused_subsphere_rule: bad resolution");

  Vec projected = focus - focus.dot(x.vec()) * x.vec();
  const double c = projected.norm();
  Mat frame;
  if (c > 1e-12) {
    frame = complete_frame(x.vec(), projected / c);
  } else {
    frame = complete_frame(x.vec());
  }
  const bool has_support = !std::isnan(options.support_cos);

  // polar panel boundaries in psi (angle from the projected focus)
  std::vector<double> breaks{0.0, kPi};
  double psi_support = kPi;
  if (has_support) {
    if (options.support_cos >= c) return SubsphereRule{x, Mat(n, 0), {}};
    psi_support = std::acos(options.support_cos / c);
    breaks.push_back(psi_support);
    breaks.push_back(kPi - psi_support);
  }
  if (c > 1e-12) {
    for (double alpha : focus_breaks) {
      const double v = std::cos(alpha) / c;
      if (v > -1.0 && v < 1.0) breaks.push_back(std::acos(v));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               breaks.end());

  std::vector<std::pair<double, double>> panels;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k], hi = breaks[k + 1];
    if (hi - lo <= 0.0) continue;
    const double mid = 0.5 * (lo + hi);
    if (has_support && mid > psi_support && mid < kPi - psi_support) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / options.max_panel_width)));
    for (int j = 0; j < pieces; ++j)
      panels.emplace_back(lo + (hi - lo) * j / pieces, lo + (hi - lo) * (j + 1) / pieces);
  }

  const SphereRule transverse = product_sphere_rule(n - 2, options.transverse_resolution);
  const Mat b1 = frame.col(1);
  const Mat bt = frame.rightCols(n - 2) * transverse.points;  // n x T
  const int sin_power = n - 3;

  const std::size_t count = panels.size() * static_cast<std::size_t>(options.panel_nodes) * transverse.size();
  SubsphereRule rule{x, Mat(n, static_cast<Eigen::Index>(count)), {}};
  rule.weights.reserve(count);
  Eigen::Index col = 0;
  for (const auto& [lo, hi] : panels) {
    const QuadratureRule1D psi = gauss_legendre(options.panel_nodes, lo, hi);
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double cp = std::cos(psi.nodes[i]);
      const double sp = std::sin(psi.nodes[i]);
      const double wp = psi.weights[i] * std::pow(sp, sin_power);
      for (std::size_t j = 0; j < transverse.size(); ++j, ++col) {
        rule.nodes.col(col) = cp * b1 + sp * bt.col(static_cast<Eigen::Index>(j));
        rule.weights.push_back(wp * transverse.weights[j]);
      }
    }
  }
  return rule;
}

double integrate_subsphere(const SphereFunction& f, const SubsphereRule& rule) {
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double value = f(rule.nodes.col(static_cast<Eigen::Index>(i)));
    if (!std::isfinite(value)) fail(ErrorKind::Domain, "integrate_subsphere: non-finite integrand value");
    terms[i] = rule.weights[i] * value;
  }
  return pairwise_sum(terms);
}

double spherical_laplacian(const SphereFunction& f, const Vec& theta, double h) {
  if (!(h >= 1e-5 && h <= 1e-2)) fail(ErrorKind::Config, "spherical_laplacian: step must lie in [1e-5, 1e-2]");
  const Eigen::Index n = theta.size();
  auto extended = [&](const Vec& y) { return f(y / y.norm()); };
  const double center = extended(theta);
  double sum = 0.0;
  Vec y = theta;
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = theta(i) + h;
    const double plus = extended(y);
    y(i) = theta(i) - h;
    const double minus = extended(y);
    y(i) = theta(i);
    sum += plus - 2.0 * center + minus;
  }
  return sum / (h * h);
}

// ---------------------------------------------------------------------------

SphereGrid::SphereGrid(int dim, Mat frame, std::vector<PolarAxis> polar, int azimuth_count, std::size_t cap)
    : dim_(dim), frame_(std::move(frame)), polar_(std::move(polar)), azimuth_(azimuth_count) {
  if (dim_ < 3) fail(ErrorKind::Domain, "SphereGrid: dimension must be >= 3");
  if (static_cast<int>(polar_.size()) != dim_ - 2) fail(ErrorKind::Config, "SphereGrid: need dim-2 polar axes");
  if (azimuth_ < 2 || azimuth_ % 2 != 0) fail(ErrorKind::Config, "SphereGrid: azimuth count must be even");
  double total = azimuth_;
  for (const auto& axis : polar_) total *= axis.size();
  if (total > static_cast<double>(cap))
    fail(ErrorKind::Resource, "SphereGrid: " + std::to_string(static_cast<long long>(total)) +
                                  " nodes exceed cap " + std::to_string(cap));
  const std::size_t count = static_cast<std::size_t>(total);

  nodes_ = Mat(dim_, static_cast<Eigen::Index>(count));
  weights_.assign(count, 0.0);
  antipode_.assign(count, -1);
  even_slot_.assign(count, -1);

  for (std::size_t i = 0; i < count; ++i) {
    std::vector<int> idx = multi_index(i);
    // antipodal multi-index
    std::size_t partner = 0;
    for (std::size_t a = 0; a < polar_.size(); ++a)
      partner = partner * polar_[a].size() + (polar_[a].size() - 1 - idx[a]);
    partner = partner * azimuth_ + (idx.back() + azimuth_ / 2) % azimuth_;
    antipode_[i] = static_cast<int>(partner);
    if (i > partner) continue;

    Vec y(dim_);
    double s = 1.0;
    double w = 2.0 * kPi / azimuth_;
    for (std::size_t a = 0; a < polar_.size(); ++a) {
      const double angle = polar_[a].angles[idx[a]];
      y(static_cast<Eigen::Index>(a)) = s * std::cos(angle);
      s *= std::sin(angle);
      w *= polar_[a].weights[idx[a]];
    }
    const double phi = (idx.back() + 0.5) * 2.0 * kPi / azimuth_;
    y(dim_ - 2) = s * std::cos(phi);
    y(dim_ - 1) = s * std::sin(phi);
    Vec x = frame_ * y;
    x /= x.norm();
    nodes_.col(static_cast<Eigen::Index>(i)) = x;
    nodes_.col(static_cast<Eigen::Index>(partner)) = -x;
    weights_[i] = weights_[partner] = w;
    even_slot_[i] = even_slot_[partner] = static_cast<int>(representatives_.size());
    representatives_.push_back(static_cast<int>(i));
  }

  hash_ = fnv1a(nodes_.data(), sizeof(double) * static_cast<std::size_t>(nodes_.size()));
  hash_ = fnv1a(weights_.data(), sizeof(double) * weights_.size(), hash_);
}

std::vector<int> SphereGrid::multi_index(std::size_t node) const {
  std::vector<int> idx(polar_.size() + 1);
  idx.back() = static_cast<int>(node % azimuth_);
  node /= azimuth_;
  for (std::size_t a = polar_.size(); a-- > 0;) {
    idx[a] = static_cast<int>(node % polar_[a].size());
    node /= polar_[a].size();
  }
  return idx;
}

std::vector<double> SphereGrid::angles_of(const Vec& theta) const {
  const Vec y = frame_.transpose() * theta;
  std::vector<double> angles(dim_ - 1);
  for (int a = 0; a < dim_ - 2; ++a) angles[a] = std::atan2(y.tail(dim_ - 1 - a).norm(), y(a));
  double phi = std::atan2(y(dim_ - 1), y(dim_ - 2));
  if (phi < 0.0) phi += 2.0 * kPi;
  angles[dim_ - 2] = phi;
  return angles;
}

void SphereGrid::interpolation_weights(const Vec& theta, std::vector<std::pair<int, double>>& out) const {
  out.clear();
  const std::vector<double> angles = angles_of(theta);
  const std::size_t axes = polar_.size();

  // per-axis (first index, weights)
  std::vector<int> first(axes + 1);
  std::vector<std::vector<double>> local(axes + 1);
  for (std::size_t a = 0; a < axes; ++a) {
    const PolarAxis& axis = polar_[a];
    auto it = std::upper_bound(axis.bounds.begin() + 1, axis.bounds.end() - 1, angles[a]);
    const int panel = static_cast<int>(it - axis.bounds.begin()) - 1;
    const int begin = axis.offsets[panel];
    const int end = axis.offsets[panel + 1];
    first[a] = begin;
    local[a].resize(end - begin);
    lagrange_weights(std::span<const double>(axis.angles).subspan(begin, end - begin), angles[a], local[a]);
  }
  first[axes] = 0;
  local[axes].resize(azimuth_);
  trig_weights(azimuth_, angles[axes], local[axes]);

  // tensor product
  std::vector<std::size_t> counter(axes + 1, 0);
  while (true) {
    double w = 1.0;
    std::size_t index = 0;
    for (std::size_t a = 0; a < axes; ++a) {
      w *= local[a][counter[a]];
      index = index * polar_[a].size() + first[a] + counter[a];
    }
    w *= local[axes][counter[axes]];
    index = index * azimuth_ + counter[axes];
    out.emplace_back(static_cast<int>(index), w);

    std::size_t a = axes + 1;
    while (a-- > 0) {
      if (++counter[a] < local[a].size()) break;
      counter[a] = 0;
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
}

std::vector<double> SphereGrid::polar_breaks() const {
  const auto& b = polar_.front().bounds;
  return std::vector<double>(b.begin() + 1, b.end() - 1);
}

double SphereGrid::polar_spacing(std::size_t node) const {
  const int k = multi_index(node).front();
  const auto& angles = polar_.front().angles;
  double gap = 0.0;
  if (k > 0) gap = std::max(gap, angles[k] - angles[k - 1]);
  else gap = std::max(gap, 2.0 * angles[k]);
  if (k + 1 < static_cast<int>(angles.size())) gap = std::max(gap, angles[k + 1] - angles[k]);
  else gap = std::max(gap, 2.0 * (kPi - angles[k]));
  return gap;
}

Mat SphereGrid::coordinate_tangents(std::size_t node) const {
  const std::vector<int> idx = multi_index(node);
  const int axes = dim_ - 2;
  std::vector<double> ang(dim_ - 1);
  for (int a = 0; a < axes; ++a) ang[a] = polar_[a].angles[idx[a]];
  ang.back() = (idx.back() + 0.5) * 2.0 * kPi / azimuth_;

  Vec y(dim_);
  std::vector<double> prefix(dim_ - 1);  // product of sines before each angle
  double s = 1.0;
  for (int a = 0; a < axes; ++a) {
    prefix[a] = s;
    y(a) = s * std::cos(ang[a]);
    s *= std::sin(ang[a]);
  }
  prefix[axes] = s;
  y(dim_ - 2) = s * std::cos(ang.back());
  y(dim_ - 1) = s * std::sin(ang.back());

  // coordinate lines of hyperspherical angles are mutually orthogonal
  Mat tangents(dim_, dim_ - 1);
  for (int a = 0; a < axes; ++a) {
    Vec d = Vec::Zero(dim_);
    d(a) = -prefix[a] * std::sin(ang[a]);
    const double cot = std::cos(ang[a]) / std::sin(ang[a]);
    for (int i = a + 1; i < dim_; ++i) d(i) = y(i) * cot;
    tangents.col(a) = frame_ * d.normalized();
  }
  Vec d = Vec::Zero(dim_);
  d(dim_ - 2) = -std::sin(ang.back());
  d(dim_ - 1) = std::cos(ang.back());
  tangents.col(dim_ - 2) = frame_ * d;
  return tangents;
}

Vec SphereGrid::sample(const SphereFunction& f) const {
  Vec values(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) values(static_cast<Eigen::Index>(i)) = f(nodes_.col(static_cast<Eigen::Index>(i)));
  return values;
}

// ---------------------------------------------------------------------------

SphereGrid sphere_grid(int n, int resolution, std::size_t cap) {
  if (n < 3) fail(ErrorKind::Domain, "sphere_grid: n must be >= 3");
  if (resolution < 4) fail(ErrorKind::Config, "sphere_grid: resolution must be >= 4");
  const int count = resolution + (resolution % 2);
  std::vector<PolarAxis> polar;
  for (int a = 0; a < n - 2; ++a) polar.push_back(single_panel_axis(count, n - 2 - a));
  return SphereGrid(n, Mat::Identity(n, n), std::move(polar), 2 * resolution, cap);
}

SphereGrid graded_sphere_grid(int n, const UnitVector& pole, double feature_angle,
                              const GradedGridSpec& spec, std::size_t cap) {
  if (n < 3 || pole.dim() != n) fail(ErrorKind::Domain, "graded_sphere_grid: dimension mismatch");
  if (spec.panel_nodes < 2 || spec.cap_panels < 1 || spec.band_panels < 1 || spec.transverse < 2 ||
      spec.azimuth < 4 || spec.azimuth % 2 != 0 || !(spec.max_mid_panel > 0.0))
    fail(ErrorKind::Config, "graded_sphere_grid: invalid spec");
  if (!(feature_angle > 0.0)) fail(ErrorKind::Domain, "graded_sphere_grid: feature angle must be positive");

  const double quarter = 0.5 * kPi;
  std::vector<double> bounds{0.0};
  if (2.0 * feature_angle + 0.1 < quarter) {
    for (int k = 1; k <= spec.cap_panels; ++k) bounds.push_back(feature_angle * k / spec.cap_panels);
    const double lo = feature_angle, hi = quarter - feature_angle;
    const int mid = std::max(1, static_cast<int>(std::ceil((hi - lo) / spec.max_mid_panel)));
    for (int k = 1; k <= mid; ++k) bounds.push_back(lo + (hi - lo) * k / mid);
    for (int k = 1; k <= spec.band_panels; ++k) bounds.push_back(hi + feature_angle * k / spec.band_panels);
  } else {
    const int count = std::max(spec.cap_panels + spec.band_panels,
                               static_cast<int>(std::ceil(quarter / spec.max_mid_panel)));
    for (int k = 1; k <= count; ++k) bounds.push_back(quarter * k / count);
  }
  bounds.back() = quarter;

  std::vector<PolarAxis> polar;
  polar.push_back(paneled_axis(bounds, spec.panel_nodes, n - 2));
  for (int a = 1; a < n - 2; ++a) polar.push_back(single_panel_axis(spec.transverse, n - 2 - a));
  return SphereGrid(n, complete_frame(pole.vec()), std::move(polar), spec.azimuth, cap);
}

}  // namespace ibody
