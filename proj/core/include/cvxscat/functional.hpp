#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "cvxscat/basis.hpp"
#include "cvxscat/data.hpp"

namespace cvxscat {

struct CostConfig {
  /// Carleman exponent; the weight at node x_m is e^{-2 lambda x_m}.
  double lambda = 1.0;
  double alpha = 1e-4;
  std::optional<double> ball_radius;

  void validate() const;
};

/// Discretized system residuals, each N x M (one column per cell).
struct Residuals {
  Eigen::MatrixXd real_part;  ///< J^(1)_{n,m}
  Eigen::MatrixXd imag_part;  ///< J^(2)_{n,m}
};

struct CostReport {
  double total = 0.0;
  double misfit = 0.0;
  double regularizer = 0.0;
  Residuals residuals;

  std::string to_json() const;
};

/// Residuals of M V' + G(V) = 0 on each cell for V = Q + Vhat, with the
/// derivative taken by a forward difference and G evaluated at the left node.
Residuals residuals(const SpectralField& Q, const SpectralField& vhat, const GalerkinCoefficients& coeffs);

/// h sum_{n,m<M} [Q^2 + (forward difference)^2]; the squared discrete H1 norm.
double regularizer(const SpectralField& Q);

/// Euclidean partials of regularizer() on the interior nodes.
SpectralField regularizer_gradient(const SpectralField& Q);

/// J = h sum_{n,m} [(J1)^2 + (J2)^2] e^{-2 lambda x_m} + alpha * regularizer(Q).
/// Q must vanish on the first and last node.
CostReport cost(const SpectralField& Q, const SpectralField& vhat, const GalerkinCoefficients& coeffs,
                const CostConfig& cfg);

/// dJ/dQ_{s,t} for the interior nodes; boundary columns are zero.
SpectralField gradient(const SpectralField& Q, const SpectralField& vhat, const GalerkinCoefficients& coeffs,
                       const CostConfig& cfg);

/// Bundles the fixed data of one inversion so cost and gradient are one-argument calls.
class CarlemanObjective {
 public:
  CarlemanObjective(SpectralField vhat, GalerkinCoefficients coeffs, CostConfig cfg);

  double operator()(const SpectralField& Q) const { return cvxscat::cost(Q, vhat_, coeffs_, cfg_).total; }
  CostReport report(const SpectralField& Q) const { return cvxscat::cost(Q, vhat_, coeffs_, cfg_); }
  SpectralField gradient(const SpectralField& Q) const { return cvxscat::gradient(Q, vhat_, coeffs_, cfg_); }
  /// Gradient as an element of the discrete H1 space (the Riesz representer).
  SpectralField h1_gradient(const SpectralField& Q) const { return h1_riesz(gradient(Q)); }

  const SpectralField& vhat() const { return vhat_; }
  const GalerkinCoefficients& coeffs() const { return coeffs_; }
  const CostConfig& config() const { return cfg_; }
  const SpatialGrid& grid() const { return vhat_.grid(); }
  int N() const { return vhat_.N(); }

  CarlemanObjective with_config(const CostConfig& cfg) const { return {vhat_, coeffs_, cfg}; }

 private:
  SpectralField vhat_;
  GalerkinCoefficients coeffs_;
  CostConfig cfg_;
};

/// Random admissible field: uniform interior nodal values in [-1, 1] rescaled
/// to H1 norm radius_fraction * R. Boundary columns are zero.
SpectralField random_field_in_ball(const SpatialGrid& grid, int N, double R, double radius_fraction,
                                   std::uint64_t seed);

struct LipschitzEstimate {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  int pairs = 0;
};

/// Sampled max of ||J'(P) - J'(Q)||_H1 / ||P - Q||_H1 over pairs in the H1 ball of radius R,
/// with J' the H1 gradient.
LipschitzEstimate estimate_gradient_lipschitz(const CarlemanObjective& objective, double R, int pairs,
                                              std::uint64_t seed);

}  // namespace cvxscat
