#include "ibody/convexity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ibody/error.hpp"
#include "ibody/random.hpp"

namespace ibody {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_angle_count(int m) {
  if (m < 64 || m % 2 != 0) fail(ErrorKind::Config, "profile: angle count must be even and >= 64");
}

}  // namespace

PlaneSectionProfile section_profile(const StarBody& b, const UnitVector& xi1, const UnitVector& xi2, int m) {
  check_angle_count(m);
  if (xi1.dim() != b.n || xi2.dim() != b.n) fail(ErrorKind::Domain, "section_profile: dimension mismatch");
  if (std::abs(xi1.vec().dot(xi2.vec())) > 1e-10) fail(ErrorKind::Domain, "section_profile: basis not orthogonal");
  PlaneSectionProfile p{xi1.vec(), xi2.vec(), std::vector<double>(m), Vec(m)};
  for (int i = 0; i < m; ++i) {
    const double phi = kTwoPi * i / m;
    p.angles[i] = phi;
    p.rho(i) = b.rho(std::cos(phi) * p.xi1 + std::sin(phi) * p.xi2);
  }
  return p;
}

PlaneSectionProfile synthetic_profile(const std::function<double(double)>& rho, int m) {
  check_angle_count(m);
  PlaneSectionProfile p{Vec::Unit(2, 0), Vec::Unit(2, 1), std::vector<double>(m), Vec(m)};
  for (int i = 0; i < m; ++i) {
    p.angles[i] = kTwoPi * i / m;
    p.rho(i) = rho(p.angles[i]);
  }
  return p;
}

CurvatureSamples curvature_functional(const PlaneSectionProfile& p) {
  const auto m = p.rho.size();
  if (m < 64) fail(ErrorKind::Config, "curvature_functional: need >= 64 samples");
  const double h = kTwoPi / static_cast<double>(m);
  auto at = [&](Eigen::Index i) { return p.rho(((i % m) + m) % m); };
  CurvatureSamples c{Vec(m), Vec(m), Vec(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    const double r = at(i);
    const double d1 = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
    const double d2 = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * r + 16.0 * at(i - 1) - at(i - 2)) / (12.0 * h * h);
    c.d1(i) = d1;
    c.d2(i) = d2;
    c.j(i) = 2.0 * d1 * d1 - d2 * r + r * r;
  }
  return c;
}

int default_angle_count(double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::Domain, "default_angle_count: eps must be positive");
  const int m = std::max(256, static_cast<int>(std::ceil(64.0 * std::numbers::pi / eps)));
  return (m + 3) / 4 * 4;
}

ConvexityCertificate convexity_scan(const StarBody& b, int num_planes, int m, std::uint64_t seed,
                                    const ConvexitySink& sink) {
  if (num_planes < 1) fail(ErrorKind::Config, "convexity_scan: need at least one plane");
  check_angle_count(m);

  std::vector<std::pair<Vec, Vec>> planes;
  Rng rng = make_stream(seed, "convexity.planes");
  for (int k = 0; k < num_planes; ++k) {
    const Mat q = haar_frame(rng, b.n, 2);
    planes.emplace_back(q.col(0), q.col(1));
  }
  const Mat frame = complete_frame(b.pole.vec());
  for (int k = 1; k < b.n; ++k) planes.emplace_back(frame.col(0), frame.col(k));

  ConvexityCertificate cert;
  cert.num_planes = num_planes;
  cert.num_axial = b.n - 1;
  cert.m = m;
  cert.seed = seed;
  cert.j_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < planes.size(); ++k) {
    const auto profile = section_profile(b, UnitVector(planes[k].first), UnitVector(planes[k].second), m);
    const auto samples = curvature_functional(profile);
    Eigen::Index i = 0;
    const double j = samples.j.minCoeff(&i);
    if (j < cert.j_min) {
      cert.j_min = j;
      cert.worst_plane = static_cast<int>(k);
      cert.worst_is_axial = static_cast<int>(k) >= num_planes;
      cert.worst_xi1 = profile.xi1;
      cert.worst_xi2 = profile.xi2;
      cert.worst_angle = profile.angles[static_cast<std::size_t>(i)];
    }
    if (sink) sink(static_cast<int>(k), profile, samples);
  }
  return cert;
}

}  // namespace ibody
