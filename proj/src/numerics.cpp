#include "ibody/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "ibody/error.hpp"

namespace ibody {

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::Domain, "gamma: argument must be positive and finite");
  const double value = std::tgamma(x);
  if (!std::isfinite(value)) fail(ErrorKind::Domain, "gamma: overflow");
  return value;
}

double sphere_area(int d) {
  if (d < 1) fail(ErrorKind::Domain, "sphere_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / gamma(0.5 * d);
}

double c_n(int n) {
  if (n < 2) fail(ErrorKind::Domain, "c_n: n must be >= 2");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / gamma(0.5 * (n - 1));
}

double sin_power_integral(int m) {
  if (m < 0) fail(ErrorKind::Domain, "sin_power_integral: m must be >= 0");
  // W_m = (m-1)/m W_{m-2}, W_0 = pi, W_1 = 2
  double value = (m % 2 == 0) ? std::numbers::pi : 2.0;
  for (int k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2) value *= static_cast<double>(k - 1) / k;
  return value;
}

namespace {

QuadratureRule1D compute_gauss_jacobi(int count, double alpha, double beta) {
  if (count < 1) fail(ErrorKind::Config, "gauss_jacobi: count must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0) fail(ErrorKind::Domain, "gauss_jacobi: alpha, beta must exceed -1");

  const double ab = alpha + beta;
  Eigen::VectorXd diag(count);
  Eigen::VectorXd sub(std::max(count - 1, 1));
  for (int k = 0; k < count; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (beta - alpha) / (ab + 2.0)
                       : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < count; ++k) {
    const double s = 2.0 * k + ab;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(b2);
  }

  QuadratureRule1D rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  if (count == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(count - 1), Eigen::ComputeEigenvectors);
  for (int k = 0; k < count; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  if (alpha == beta) {
    // symmetric weight: enforce exact mirror symmetry of the rule
    for (int k = 0; k < count / 2; ++k) {
      const int j = count - 1 - k;
      const double t = 0.5 * (rule.nodes[j] - rule.nodes[k]);
      const double w = 0.5 * (rule.weights[j] + rule.weights[k]);
      rule.nodes[k] = -t;
      rule.nodes[j] = t;
      rule.weights[k] = rule.weights[j] = w;
    }
    if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  }
  return rule;
}

}  // namespace

QuadratureRule1D gauss_jacobi(int count, double alpha, double beta) {
  // Rules are requested with a handful of parameter sets, many times over.
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, QuadratureRule1D> memo;
  const auto key = std::make_tuple(count, alpha, beta);
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  QuadratureRule1D rule = compute_gauss_jacobi(count, alpha, beta);
  std::lock_guard lock(mutex);
  memo.emplace(key, rule);
  return rule;
}

QuadratureRule1D gauss_legendre(int count, double lo, double hi) {
  QuadratureRule1D rule = gauss_jacobi(count, 0.0, 0.0);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) return std::accumulate(values.begin(), values.end(), 0.0);
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::Domain, "fit_line: need >= 2 matching points");
  const double count = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / count;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::Domain, "fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / count);
  return fit;
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
  auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a(std::string_view text) { return fnv1a(text.data(), text.size()); }

}  // namespace ibody
