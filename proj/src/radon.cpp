#include "ibody/radon.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ibody/error.hpp"

namespace ibody {

GridFunction GridFunction::sample(std::shared_ptr<const SphereGrid> grid, const SphereFunction& f) {
  Vec values = grid->sample(f);
  return GridFunction{std::move(grid), std::move(values)};
}

Vec GridFunction::even_part() const {
  const auto& sigma = grid->antipode();
  Vec out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out(i) = 0.5 * (values(i) + values(sigma[i]));
  return out;
}

Vec GridFunction::odd_part() const {
  const auto& sigma = grid->antipode();
  Vec out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out(i) = 0.5 * (values(i) - values(sigma[i]));
  return out;
}

double funk_apply(const SphereFunction& g, const UnitVector& xi, int resolution) {
  return integrate_subsphere(g, subsphere_rule(xi, resolution));
}

// ---------------------------------------------------------------------------

FunkOperator::FunkOperator(std::shared_ptr<const SphereGrid> grid, Mat even_matrix, int resolution, double cutoff)
    : grid_(std::move(grid)), matrix_(std::move(even_matrix)), resolution_(resolution), cutoff_(cutoff),
      cache_(std::make_shared<SvdCache>()) {
  const auto count = static_cast<Eigen::Index>(grid_->representatives().size());
  if (matrix_.rows() != count || matrix_.cols() != count)
    fail(ErrorKind::Config, "FunkOperator: matrix does not match the grid's even subspace");
  const auto& reps = grid_->representatives();
  balance_.resize(static_cast<Eigen::Index>(reps.size()));
  for (std::size_t k = 0; k < reps.size(); ++k)
    balance_(static_cast<Eigen::Index>(k)) = std::sqrt(grid_->weights()[static_cast<std::size_t>(reps[k])]);
}

Vec FunkOperator::fold(const Vec& full) const {
  const auto& reps = grid_->representatives();
  const auto& sigma = grid_->antipode();
  if (full.size() != static_cast<Eigen::Index>(grid_->size())) fail(ErrorKind::Domain, "FunkOperator: size mismatch");
  Vec even(static_cast<Eigen::Index>(reps.size()));
  for (std::size_t k = 0; k < reps.size(); ++k) even(static_cast<Eigen::Index>(k)) = 0.5 * (full(reps[k]) + full(sigma[reps[k]]));
  return even;
}

Vec FunkOperator::unfold(const Vec& even) const {
  Vec full(static_cast<Eigen::Index>(grid_->size()));
  for (std::size_t i = 0; i < grid_->size(); ++i) full(static_cast<Eigen::Index>(i)) = even(grid_->even_slot(i));
  return full;
}

Vec FunkOperator::apply(const Vec& full) const { return unfold(matrix_ * fold(full)); }

const Eigen::BDCSVD<Mat>& FunkOperator::svd() const {
  std::call_once(cache_->once, [this] {
    const Mat balanced = balance_.asDiagonal() * matrix_ * balance_.cwiseInverse().asDiagonal();
    cache_->svd = std::make_unique<Eigen::BDCSVD<Mat>>(balanced, Eigen::ComputeThinU | Eigen::ComputeThinV);
  });
  return *cache_->svd;
}

FunkOperator assemble_operator(std::shared_ptr<const SphereGrid> grid, const FunkOptions& options) {
  const SphereGrid& g = *grid;
  const auto& reps = g.representatives();
  if (reps.size() > options.even_cap)
    fail(ErrorKind::Resource, "assemble_operator: " + std::to_string(reps.size()) +
                                  " even nodes exceed cap " + std::to_string(options.even_cap));

  int largest_panel = 0;
  for (const auto& axis : g.polar_axes())
    for (int p = 0; p < axis.panels(); ++p) largest_panel = std::max(largest_panel, axis.offsets[p + 1] - axis.offsets[p]);
  const int resolution = options.resolution > 0 ? options.resolution : largest_panel + 8;

  FocusedRuleOptions rule_options;
  rule_options.panel_nodes = resolution;
  rule_options.transverse_resolution = options.transverse_resolution;
  rule_options.max_panel_width = options.max_panel_width;
  const std::vector<double> breaks = g.polar_breaks();
  // Rows are built in grid coordinates so the matrix does not depend on how
  // the grid frame sits in space.
  const Mat& frame = g.frame();
  const Vec pole = Vec::Unit(g.dim(), 0);

  const auto count = static_cast<Eigen::Index>(reps.size());
  Mat matrix = Mat::Zero(count, count);
  std::vector<std::pair<int, double>> weights;
  for (Eigen::Index row = 0; row < count; ++row) {
    const UnitVector xi(Vec(frame.transpose() * g.node(static_cast<std::size_t>(reps[row]))));
    const SubsphereRule rule = focused_subsphere_rule(xi, pole, breaks, rule_options);
    const Mat nodes = frame * rule.nodes;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      g.interpolation_weights(nodes.col(static_cast<Eigen::Index>(q)), weights);
      for (const auto& [node, w] : weights) matrix(row, g.even_slot(static_cast<std::size_t>(node))) += rule.weights[q] * w;
    }
  }
  return FunkOperator(std::move(grid), std::move(matrix), resolution, options.cutoff);
}

// ---------------------------------------------------------------------------
// FUNK1 cache: magic "FUNK1", n:u32, N:u32, resolution:u32, then N*N
// row-major little-endian f64.

namespace {

constexpr std::array<char, 5> kMagic{'F', 'U', 'N', 'K', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char bytes[4] = {};
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void write_f64(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_f64(std::istream& in) {
  unsigned char bytes[8] = {};
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::filesystem::path operator_cache_path(const std::filesystem::path& dir, const SphereGrid& grid, int resolution) {
  std::ostringstream name;
  name << "funk-n" << grid.dim() << "-N" << grid.representatives().size() << "-r" << resolution << "-" << std::hex
       << grid.hash() << ".bin";
  return dir / name.str();
}

void write_operator_cache(const std::filesystem::path& path, const FunkOperator& op) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write operator cache " + path.string());
  out.write(kMagic.data(), kMagic.size());
  const Mat& m = op.even_matrix();
  write_u32(out, static_cast<std::uint32_t>(op.grid().dim()));
  write_u32(out, static_cast<std::uint32_t>(m.rows()));
  write_u32(out, static_cast<std::uint32_t>(op.resolution()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) write_f64(out, m(i, j));
  if (!out) fail(ErrorKind::Io, "short write to operator cache " + path.string());
}

std::optional<Mat> read_operator_cache(const std::filesystem::path& path, int n, std::size_t rows, int resolution) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 5> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) return std::nullopt;
  const std::uint32_t file_n = read_u32(in);
  const std::uint32_t file_rows = read_u32(in);
  const std::uint32_t file_res = read_u32(in);
  if (!in || file_n != static_cast<std::uint32_t>(n) || file_rows != rows ||
      file_res != static_cast<std::uint32_t>(resolution))
    return std::nullopt;
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = read_f64(in);
  if (!in) return std::nullopt;
  return m;
}

FunkOperator assemble_operator_cached(std::shared_ptr<const SphereGrid> grid, const FunkOptions& options,
                                      const std::optional<std::filesystem::path>& cache_dir) {
  if (!cache_dir) return assemble_operator(std::move(grid), options);
  int largest_panel = 0;
  for (const auto& axis : grid->polar_axes())
    for (int p = 0; p < axis.panels(); ++p) largest_panel = std::max(largest_panel, axis.offsets[p + 1] - axis.offsets[p]);
  const int resolution = options.resolution > 0 ? options.resolution : largest_panel + 8;
  const auto path = operator_cache_path(*cache_dir, *grid, resolution);
  if (auto cached = read_operator_cache(path, grid->dim(), grid->representatives().size(), resolution))
    return FunkOperator(std::move(grid), std::move(*cached), resolution, options.cutoff);
  FunkOperator op = assemble_operator(std::move(grid), options);
  std::filesystem::create_directories(*cache_dir);
  write_operator_cache(path, op);
  return op;
}

// ---------------------------------------------------------------------------

InversionResult funk_invert(const FunkOperator& op, const Vec& rhs) {
  const Vec even_rhs = op.fold(rhs);
  const auto& svd = op.svd();
  const Vec& sigma = svd.singularValues();
  const double threshold = op.cutoff() * (sigma.size() > 0 ? sigma(0) : 0.0);

  InversionResult result;
  const Vec& d = op.balance();
  Vec coeffs = svd.matrixU().transpose() * d.cwiseProduct(even_rhs);
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) >= threshold && sigma(k) > 0.0) {
      coeffs(k) /= sigma(k);
      ++result.rank;
    } else {
      coeffs(k) = 0.0;
    }
  }
  const Vec solution = (svd.matrixV() * coeffs).cwiseQuotient(d);
  const Vec mismatch = op.even_matrix() * solution - even_rhs;
  const double scale = even_rhs.cwiseAbs().maxCoeff();
  result.residual = scale > 0.0 ? mismatch.cwiseAbs().maxCoeff() / scale : mismatch.cwiseAbs().maxCoeff();
  result.inconclusive = result.residual > 0.05;
  result.preimage = op.unfold(solution);
  return result;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Intersection: return "intersection";
    case Verdict::NotIntersection: return "not_intersection";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

IntersectionCertificate intersection_certificate(const FunkOperator& op, const Vec& radial) {
  if (radial.size() != static_cast<Eigen::Index>(op.grid().size()))
    fail(ErrorKind::Domain, "intersection_certificate: radial size mismatch");
  if (!(radial.minCoeff() > 0.0)) fail(ErrorKind::Domain, "intersection_certificate: radial function must be positive");

  const InversionResult inv = funk_invert(op, radial / std::numbers::pi);
  IntersectionCertificate cert;
  Eigen::Index argmin = 0;
  cert.min_preimage = inv.preimage.minCoeff(&argmin);
  cert.argmin = static_cast<int>(argmin);
  cert.argmin_direction = op.grid().node(static_cast<std::size_t>(argmin));
  cert.residual = inv.residual;
  cert.max_abs_preimage = inv.preimage.cwiseAbs().maxCoeff();
  cert.residual_scale = inv.residual * cert.max_abs_preimage;
  cert.rank = inv.rank;
  cert.preimage = inv.preimage;
  if (inv.inconclusive) {
    cert.verdict = Verdict::Inconclusive;
  } else if (cert.min_preimage < -5.0 * cert.residual_scale) {
    cert.verdict = Verdict::NotIntersection;
  } else if (cert.min_preimage > 5.0 * cert.residual_scale) {
    cert.verdict = Verdict::Intersection;
  } else {
    cert.verdict = Verdict::Inconclusive;
  }
  return cert;
}

}  // namespace ibody
