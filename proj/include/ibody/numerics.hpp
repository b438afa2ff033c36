#pragma once

// Scalar special functions, closed-form sphere constants and 1-D quadrature
// rules shared by every other module.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ibody {

/// Euler Gamma function for x > 0. Throws ErrorKind::Domain otherwise.
double gamma(double x);

/// Surface measure of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

/// C_n = 2 pi^{(n+1)/2} / Gamma((n-1)/2), the radius of the unperturbed body.
/// Equals pi * sphere_area(n - 1).
double c_n(int n);

/// Integral of sin^m over [0, pi] via the Wallis recurrence.
double sin_power_integral(int m);

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1]
/// (Golub-Welsch). Nodes ascending.
QuadratureRule1D gauss_jacobi(int count, double alpha, double beta);

/// Gauss-Legendre rule on [lo, hi].
QuadratureRule1D gauss_legendre(int count, double lo = -1.0, double hi = 1.0);

/// Pairwise (cascade) summation; fixed order, so results are reproducible.
double pairwise_sum(std::span<const double> values);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least-squares fit y = slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// 64-bit FNV-1a, used for grid hashes and RNG stream labels.
std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 14695981039346656037ULL);
std::uint64_t fnv1a(std::string_view text);

}  // namespace ibody
