#pragma once

#include <Eigen/Dense>

#include "cvxscat/basis.hpp"
#include "cvxscat/forward.hpp"
#include "cvxscat/grid.hpp"

namespace cvxscat {

/// 2N real component functions sampled on a spatial grid.
///
/// Row n < N holds Re v_n(x_m), row n + N holds Im v_n(x_m); column m is node x_m.
class SpectralField {
 public:
  SpectralField(const SpatialGrid& grid, int N);
  SpectralField(const SpatialGrid& grid, Eigen::MatrixXd values);

  const SpatialGrid& grid() const { return grid_; }
  int N() const { return static_cast<int>(values_.rows()) / 2; }
  int components() const { return static_cast<int>(values_.rows()); }
  int nodes() const { return static_cast<int>(values_.cols()); }

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }
  double operator()(int s, int m) const { return values_(s, m); }
  double& operator()(int s, int m) { return values_(s, m); }

  /// True when the first and last columns are exactly zero.
  bool boundary_is_zero() const;
  void zero_boundary();
  bool all_finite() const { return values_.allFinite(); }

  /// Interior columns 1..M-1 flattened column-major; the free variables of the inversion.
  Eigen::VectorXd interior() const;
  /// Inverse of interior(); boundary columns become zero.
  static SpectralField from_interior(const SpatialGrid& grid, int N, const Eigen::VectorXd& x);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  SpatialGrid grid_;
  Eigen::MatrixXd values_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Discrete H1 inner product with forward differences and left-endpoint sums:
///   h sum_{n} sum_{m<M} [P_{n,m} Q_{n,m} + (dP_{n,m})(dQ_{n,m})], d = forward difference / h.
double h1_inner(const SpectralField& p, const SpectralField& q);
double h1_norm(const SpectralField& q);

/// Riesz representer in the discrete H1 inner product of a linear functional
/// given by its Euclidean partials `g` on the interior nodes (boundary columns
/// are ignored and returned as zero). Solves one tridiagonal system per component.
SpectralField h1_riesz(const SpectralField& g);

/// V(0) = V0 and V(b) = Vb, each with 2N components.
struct BoundaryVectors {
  Eigen::VectorXd V0;
  Eigen::VectorXd Vb;
};

/// Projects v0(k) and -i/k onto the basis with its discrete inner product.
/// The basis must be in Discrete mode on the same wavenumbers as the data.
BoundaryVectors boundary_vectors(const ScatterData& sd, const SpectralBasis& basis);

/// Componentwise linear interpolation between V0 at x_min and Vb at x_max.
SpectralField build_vhat(const BoundaryVectors& bv, const SpatialGrid& grid);

/// v(x, k) = u_x / (k^2 u) from forward solves, one row per wavenumber and one
/// column per node of `grid`. u_x uses central differences on the forward grid
/// (one-sided at its ends); values are linearly interpolated onto `grid`.
Eigen::MatrixXcd sample_log_derivative(const MediumProfile& profile, const WavenumberGrid& kgrid,
                                       const SpatialGrid& grid, double x0, double forward_h = 1e-3);

/// V_n(x_m) = sum_i w_i Re v(x_m, k_i) f_n(k_i), V_{n+N} likewise with Im.
SpectralField project_onto_basis(const Eigen::MatrixXcd& samples, const SpectralBasis& basis,
                                 const SpatialGrid& grid);

/// Relative L2 (over all wavenumber/node pairs) of sum_n v_n f_n(k_i) - v(x_m, k_i).
double synthesis_residual(const SpectralField& V, const Eigen::MatrixXcd& samples, const SpectralBasis& basis);

/// Oracle field V* of the exact coefficient: sample_log_derivative followed by projection.
SpectralField exact_spectral_field(const MediumProfile& profile, const WavenumberGrid& kgrid,
                                   const SpectralBasis& basis, const SpatialGrid& grid, double x0,
                                   double forward_h = 1e-3);

}  // namespace cvxscat
