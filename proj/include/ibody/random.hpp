#pragma once

// Seeded random streams. Each pipeline stage draws from its own stream,
// derived from the run seed and a fixed label, so stages do not perturb
// each other.

#include <cstdint>
#include <random>
#include <string_view>

#include "ibody/sphere.hpp"

namespace ibody {

using Rng = std::mt19937_64;

Rng make_stream(std::uint64_t seed, std::string_view label);

/// Uniform (Haar) point on S^{n-1}.
UnitVector haar_unit_vector(Rng& rng, int n);

/// n x k matrix with orthonormal columns, Haar distributed (QR of a Gaussian
/// matrix with the sign convention diag(R) > 0).
Mat haar_frame(Rng& rng, int n, int k);

}  // namespace ibody
