#include "ibody/sections.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ibody/error.hpp"
#include "ibody/numerics.hpp"
#include "ibody/random.hpp"

namespace ibody {

namespace {

constexpr double kPi = std::numbers::pi;

// Integral over phi in [0, pi] of f(normal cos phi + xi sin phi) sin^{n-3} phi.
double great_circle_integral(const BumpParams& p, const Vec& normal, const Vec& xi, int nodes) {
  const double a = normal.dot(p.x0.vec());
  const double b = xi.dot(p.x0.vec());
  const double r = std::hypot(a, b);
  if (r <= p.cap_cos()) return 0.0;
  const double center = std::atan2(b, a);
  const double half = std::acos(p.cap_cos() / r);
  const int sin_power = p.n - 3;
  double total = 0.0;
  Vec y(normal.size());
  for (double shift : {-kPi, 0.0, kPi}) {
    const double lo = std::max(0.0, center + shift - half);
    const double hi = std::min(kPi, center + shift + half);
    if (hi <= lo) continue;
    const QuadratureRule1D rule = gauss_legendre(nodes, lo, hi);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double phi = rule.nodes[k];
      y = std::cos(phi) * normal + std::sin(phi) * xi;
      total += rule.weights[k] * bump_eval(p, y) * std::pow(std::sin(phi), sin_power);
    }
  }
  return total;
}

}  // namespace

SubspaceFrame subspace_frame(const UnitVector& normal) {
  HyperplaneBasis basis = orthonormal_basis(normal);
  return SubspaceFrame{normal, std::move(basis.basis)};
}

StarBody section_restrict(const StarBody& b, const SubspaceFrame& frame, const GradedGridSpec& spec) {
  if (frame.basis.rows() != b.n || frame.basis.cols() != b.n - 1)
    fail(ErrorKind::Domain, "section_restrict: frame dimension mismatch");
  const int m = b.n - 1;
  const Vec projected = frame.basis.transpose() * b.pole.vec();
  const double norm = projected.norm();
  UnitVector pole = UnitVector::axis(m, 0);
  double feature = b.feature_angle;
  if (norm > 1e-12) {
    pole = UnitVector(projected);
    feature = std::asin(std::min(1.0, std::sin(b.feature_angle) / norm));
  }
  const Mat basis = frame.basis;
  SphereFunction rho = [outer = b.rho, basis](const Vec& u) { return outer(basis * u); };
  return make_star_body(m, std::move(rho), pole, feature, spec);
}

double deficit(const BumpParams& p, const SubspaceFrame& frame, const UnitVector& theta, int nodes) {
  if (theta.dim() != p.n || frame.basis.rows() != p.n) fail(ErrorKind::Domain, "deficit: dimension mismatch");
  if (nodes < 2) fail(ErrorKind::Config, "deficit: need at least 2 nodes");
  const Vec& e = frame.normal.vec();
  const Vec& t = theta.vec();
  if (std::abs(t.dot(e)) > 1e-10) fail(ErrorKind::Domain, "deficit: theta must lie in V");

  // xi ranges over the unit sphere of V cap theta-perp; the integral depends on
  // xi only through (xi, x0), which ranges over [-|w|, |w|] with w the
  // projection of x0 onto that subspace, and is even in it.
  Vec w = p.x0.vec() - p.x0.vec().dot(e) * e - p.x0.vec().dot(t) * t;
  const double wn = w.norm();
  const Mat q = complete_frame(e, t);
  const Vec u1 = wn > 1e-14 ? Vec(w / wn) : Vec(q.col(2));
  // any unit vector orthogonal to e, t and u1
  Vec u2 = q.col(3) - q.col(3).dot(u1) * u1;
  if (u2.norm() < 1e-8) u2 = q.col(2) - q.col(2).dot(u1) * u1;
  u2.normalize();
  auto value = [&](double s) {
    const Vec xi = std::cos(s) * u1 + std::sin(s) * u2;
    return great_circle_integral(p, e, xi, nodes);
  };
  constexpr int kSamples = 64;
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k <= kSamples; ++k) {
    const double v = value(0.5 * kPi * k / kSamples);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  // golden-section refinement around the best sample
  double lo = 0.5 * kPi * std::max(0, best_k - 1) / kSamples;
  double hi = 0.5 * kPi * std::min(kSamples, best_k + 1) / kSamples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = value(x2);
    }
  }
  return std::max({best, f1, f2});
}

SectionCertificate section_certificate(const StarBody& b, const SubspaceFrame& frame, const SectionOptions& options,
                                       std::uint64_t seed) {
  if (b.n < 5) fail(ErrorKind::Domain, "section_certificate: need n >= 5");
  SectionCertificate cert{"", -1, frame, {}, 0.0, Vec(), sin_power_integral(b.n - 3), 0.0, 0, 0};

  const StarBody inner = section_restrict(b, frame, options.inner_grid);
  cert.feature_angle = inner.feature_angle;
  cert.grid_hash = inner.grid->hash();
  cert.grid_nodes = inner.grid->size();
  const FunkOperator op = assemble_operator_cached(inner.grid, options.funk, options.cache_dir);
  cert.inner = intersection_certificate(op, inner.sampled);

  cert.deficit_theta = frame.basis.col(0);
  if (b.params) {
    const BumpParams& p = *b.params;
    std::vector<Vec> thetas;
    const Vec pv = frame.basis * (frame.basis.transpose() * p.x0.vec());
    if (pv.norm() > 1e-12) {
      thetas.push_back(pv.normalized());
      // in V, orthogonal to the projection of x0
      const Vec local = frame.basis.transpose() * pv.normalized();
      const Mat q = complete_frame(local);
      thetas.push_back(frame.basis * q.col(1));
    } else {
      thetas.push_back(frame.basis.col(0));
      thetas.push_back(frame.basis.col(1));
    }
    Rng rng = make_stream(seed, "sections.theta");
    for (int k = 0; k < options.theta_samples; ++k)
      thetas.push_back(frame.basis * haar_unit_vector(rng, b.n - 1).vec());
    cert.deficit_max = -1.0;
    for (const Vec& t : thetas) {
      const double d = deficit(p, frame, UnitVector(t), options.deficit_nodes);
      if (d > cert.deficit_max) {
        cert.deficit_max = d;
        cert.deficit_theta = t;
      }
    }
  }
  return cert;
}

std::vector<SectionCertificate> section_scan(const StarBody& b, int num_subspaces, std::uint64_t seed,
                                             const SectionOptions& options) {
  if (num_subspaces < 1) fail(ErrorKind::Config, "section_scan: need at least one subspace");
  std::vector<std::pair<std::string, UnitVector>> normals;
  normals.emplace_back("normal_x0", b.pole);
  normals.emplace_back("normal_perp_x0", UnitVector(Vec(complete_frame(b.pole.vec()).col(1))));
  Rng rng = make_stream(seed, "sections.normals");
  for (int k = 0; k < num_subspaces; ++k) normals.emplace_back("haar", haar_unit_vector(rng, b.n));

  std::vector<SectionCertificate> out;
  out.reserve(normals.size());
  for (std::size_t k = 0; k < normals.size(); ++k) {
    const std::uint64_t frame_seed = seed ^ fnv1a(&k, sizeof k);
    SectionCertificate cert = section_certificate(b, subspace_frame(normals[k].second), options, frame_seed);
    cert.kind = normals[k].first;
    cert.frame_id = static_cast<int>(k);
    out.push_back(std::move(cert));
  }
  auto rank = [](Verdict v) { return v == Verdict::NotIntersection ? 0 : v == Verdict::Inconclusive ? 1 : 2; };
  std::stable_sort(out.begin(), out.end(), [&](const SectionCertificate& x, const SectionCertificate& y) {
    if (rank(x.inner.verdict) != rank(y.inner.verdict)) return rank(x.inner.verdict) < rank(y.inner.verdict);
    return x.inner.min_preimage < y.inner.min_preimage;
  });
  return out;
}

}  // namespace ibody
