#pragma once

#include <span>
#include <vector>

#include "cvxscat/basis.hpp"
#include "cvxscat/data.hpp"
#include "cvxscat/profile.hpp"

namespace cvxscat {

struct CoefficientEstimate {
  std::vector<double> x;
  std::vector<double> c;       ///< real part of the recovered coefficient
  std::vector<double> c_imag;  ///< imaginary residue; zero for an exact solution
  /// ||Im c|| / ||Re c|| over the grid.
  double imag_ratio = 0.0;
};

/// c(x_m) = -sum_n v_n'(x_m) f_n(k) - k^2 (sum_n v_n(x_m) f_n(k))^2 with
/// v_n = V_n + i V_{n+N}. v_n' is a forward difference, backward at the last node.
CoefficientEstimate coefficient_from_field(const SpectralField& V, const SpectralBasis& basis, double k_eval);

/// max(c, 1) pointwise.
std::vector<double> clip_to_physical(std::span<const double> c);

/// Samples the true coefficient on the grid nodes.
std::vector<double> sample_profile(const MediumProfile& profile, const SpatialGrid& grid);

/// Trapezoidal L2 norm on the grid nodes.
double l2_norm(std::span<const double> f, const SpatialGrid& grid);
/// ||a - b||_L2 / ||b||_L2.
double relative_l2_error(std::span<const double> a, std::span<const double> b, const SpatialGrid& grid);

/// Node position of the largest value.
double argmax_location(std::span<const double> c, const SpatialGrid& grid);

/// Relative L2 distance between reconstructions evaluated at the first and
/// second data wavenumber. Large values flag an inadequate basis.
double k_stability(const SpectralField& V, const SpectralBasis& basis);

}  // namespace cvxscat
