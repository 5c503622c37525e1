#pragma once

#include <cmath>

#include "cvxscat/experiment.hpp"

namespace cvxscat::testing {

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

/// Random admissible field with the given seed, in a ball of radius R.
inline SpectralField random_q(const SpatialGrid& grid, int N, double R, std::uint64_t seed) {
  return random_field_in_ball(grid, N, R, 0.7, seed);
}

inline double dot(const SpectralField& a, const SpectralField& b) {
  return (a.values().array() * b.values().array()).sum();
}

}  // namespace cvxscat::testing
