#include "ibody/random.hpp"

#include <Eigen/QR>

#include "ibody/error.hpp"
#include "ibody/numerics.hpp"

namespace ibody {

Rng make_stream(std::uint64_t seed, std::string_view label) {
  const std::uint64_t mixed = fnv1a(label.data(), label.size(), fnv1a(&seed, sizeof seed));
  std::seed_seq seq{static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32),
                    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

namespace {

Mat gaussian(Rng& rng, int n, int k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat g(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  return g;
}

}  // namespace

UnitVector haar_unit_vector(Rng& rng, int n) {
  if (n < 1) fail(ErrorKind::Domain, "haar_unit_vector: n must be >= 1");
  for (;;) {
    Vec g = gaussian(rng, n, 1).col(0);
    if (g.norm() > 1e-8) return UnitVector(std::move(g));
  }
}

Mat haar_frame(Rng& rng, int n, int k) {
  if (k < 1 || k > n) fail(ErrorKind::Domain, "haar_frame: need 1 <= k <= n");
  const Mat g = gaussian(rng, n, k);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, k);
  const Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace ibody
