#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cvxscat/grid.hpp"

namespace cvxscat {

/// Inner product used to orthonormalize the basis and evaluate every
/// k-integral downstream.
enum class QuadratureMode {
  /// Trapezoidal weights on the K data wavenumbers.
  Discrete,
  /// 2001-node trapezoid on [k_min, k_max]; approximates the L2 theory.
  Dense,
};

std::string to_string(QuadratureMode mode);

/// Orthonormal functions f_1..f_N on [k_min, k_max] obtained by Gram-Schmidt
/// from the generators t^{n-1} e^t, t = (k - k_min) / (k_max - k_min), and the
/// rescaling f_n(k) = phi_n(t) / sqrt(k_max - k_min).
///
/// Each phi_n is stored as a lower-triangular row of combination coefficients
/// over the generators, so values and derivatives are evaluated analytically.
class SpectralBasis {
 public:
  int size() const { return static_cast<int>(coeffs_.rows()); }
  QuadratureMode mode() const { return mode_; }

  /// Wavenumbers the basis was requested for (the data grid).
  const WavenumberGrid& data_grid() const { return data_grid_; }
  /// Nodes of the inner product; equals data_grid() in Discrete mode.
  const WavenumberGrid& quadrature_grid() const { return quad_grid_; }

  /// Row n: coefficients of phi_n over t^{j-1} e^t, j = 1..N.
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }
  /// N x Kq matrix of f_n(k_i) on the quadrature grid.
  const Eigen::MatrixXd& values() const { return values_; }
  /// N x Kq matrix of f_n'(k_i) on the quadrature grid.
  const Eigen::MatrixXd& derivatives() const { return derivs_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Condition number of the generator Gram matrix under the chosen inner product.
  double gram_condition() const { return gram_condition_; }

  /// f_n(k) and f_n'(k) at arbitrary k, n zero-based.
  double value(int n, double k) const;
  double derivative(int n, double k) const;

  /// max |F W F^T - I|.
  double orthonormality_residual() const;

 private:
  friend SpectralBasis build_basis(const WavenumberGrid&, int, QuadratureMode, int);
  SpectralBasis(const WavenumberGrid& data_grid, const WavenumberGrid& quad_grid, QuadratureMode mode)
      : data_grid_(data_grid), quad_grid_(quad_grid), mode_(mode) {}

  WavenumberGrid data_grid_;
  WavenumberGrid quad_grid_;
  QuadratureMode mode_;
  Eigen::MatrixXd coeffs_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd derivs_;
  Eigen::VectorXd weights_;
  double gram_condition_ = 0.0;
};

/// Throws BasisConstructionError when N > K or the generator Gram matrix has
/// condition number above 1e12.
SpectralBasis build_basis(const WavenumberGrid& kgrid, int N, QuadratureMode mode = QuadratureMode::Discrete,
                          int dense_nodes = 2001);

/// M_mn = <f_n', f_m> and G_mnj = <2k f_n f_j + 2k^2 f_n f_j', f_m>.
struct GalerkinCoefficients {
  int N = 0;
  Eigen::MatrixXd M;
  std::vector<double> G_flat;
  double M_condition = 0.0;

  double G(int m, int n, int j) const { return G_flat[(static_cast<std::size_t>(m) * N + n) * N + j]; }
  double& G(int m, int n, int j) { return G_flat[(static_cast<std::size_t>(m) * N + n) * N + j]; }

  /// Zero M and G of order N (used to inject surrogate problems in tests).
  static GalerkinCoefficients zeros(int N);
};

Eigen::MatrixXd assemble_M(const SpectralBasis& basis);
std::vector<double> assemble_G(const SpectralBasis& basis);
GalerkinCoefficients galerkin_coefficients(const SpectralBasis& basis);

}  // namespace cvxscat
