#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvxscat/experiment.hpp"
#include "cvxscat/functional.hpp"

namespace cvxscat {

// Numerical certificates for the convexification theory. Each is
// deterministic for a fixed seed and serializes to JSON.

struct CarlemanSides {
  double lhs = 0.0;  ///< \int (h')^2 e^{-2 lambda x}
  double rhs = 0.0;  ///< \int h^2 e^{-2 lambda x}
};

/// Both integrals for the piecewise-linear interpolant of nodal values `h`,
/// each by the composite trapezoid rule on the grid nodes.
CarlemanSides carleman_sides(const SpatialGrid& grid, std::span<const double> h, double lambda);

struct CarlemanCertificate {
  struct PerLambda {
    double lambda = 0.0;
    double min_margin = 0.0;         ///< min of lhs - lambda^2 rhs
    double min_scaled_margin = 0.0;  ///< min of margin / max(lhs, lambda^2 rhs)
    int failures = 0;
    bool passed = false;
  };
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<PerLambda> per_lambda;
  bool passed = false;

  std::string to_json() const;
};

/// Random nodal h with h(0) = 0, uniform in [-1, 1] elsewhere. A trial passes
/// when lhs - lambda^2 rhs >= -1e-8 max(lhs, lambda^2 rhs).
CarlemanCertificate certify_carleman(const SpatialGrid& grid, std::span<const double> lambdas, int trials,
                                     std::uint64_t seed);

struct ConvexityCertificate {
  struct PerLambda {
    double lambda = 0.0;
    double min_gap = 0.0;
    double min_ratio = 0.0;         ///< min gap / ||Qt - Q||_H1^2 at the configured alpha
    double min_ratio_alpha0 = 0.0;  ///< same with alpha = 0
    int negative_gaps = 0;
    int skipped = 0;
    bool passed = false;
    bool passed_alpha0 = false;
  };
  double R = 0.0;
  double alpha = 0.0;
  int pairs = 0;
  std::uint64_t seed = 0;
  std::vector<PerLambda> per_lambda;
  /// Smallest tested lambda at which the alpha = 0 certificate passes.
  std::optional<double> empirical_lambda0;
  /// Every tested lambda >= lambda0 also passes at alpha = 0.
  bool self_consistent = false;
  bool passed = false;

  std::string to_json() const;
};

/// Samples pairs in the H1 ball of radius R and measures the Bregman gap
/// J(Qt) - J(Q) - J'(Q)(Qt - Q). Passes at lambda when the minimum ratio to
/// ||Qt - Q||^2 is > 0, and > alpha when alpha > 0.
ConvexityCertificate certify_convexity(const CarlemanObjective& objective, double R, std::span<const double> lambdas,
                                       int pairs, std::uint64_t seed);

struct LipschitzCertificate {
  double max_ratio = 0.0;
  double resampled_max_ratio = 0.0;
  double relative_change = 0.0;
  int pairs = 0;
  bool passed = false;

  std::string to_json() const;
};

/// Sampled Lipschitz constant of the H1 gradient; passes when finite and
/// reproduced within 20% by an independent resample.
LipschitzCertificate certify_lipschitz(const CarlemanObjective& objective, double R, int pairs, std::uint64_t seed);

struct GradientCheckCertificate {
  struct Rung {
    double eps = 0.0;
    double max_relative_error = 0.0;
  };
  int directions = 0;
  double eps = 1e-6;
  double max_relative_error = 0.0;
  std::vector<Rung> ladder;
  bool passed = false;

  std::string to_json() const;
};

/// Central differences (J(Q + eps e) - J(Q - eps e)) / 2 eps against grad . e
/// for random unit directions e at a random Q in the ball; passes when the
/// relative error is below 1e-5 at eps = 1e-6.
GradientCheckCertificate certify_gradient(const CarlemanObjective& objective, double R, int directions,
                                          std::uint64_t seed);

struct ContractionCertificate {
  double gamma = 0.0;
  double lipschitz = 0.0;
  int iterations = 0;
  int tail = 0;
  std::vector<double> tail_ratios;
  double q_max = 0.0;
  double initial_distance = 0.0;
  double final_distance = 0.0;
  bool passed = false;

  std::string to_json() const;
};

/// Runs `iterations` gradient-projection steps from Q0 with a fixed gamma and
/// measures ||Q^(n+1) - Q_min|| / ||Q^(n) - Q_min|| over the last `tail` steps,
/// Q_min being a tightly converged quasi-Newton solution. Passes when all tail
/// ratios are < 1.
ContractionCertificate certify_contraction(const CarlemanObjective& objective, const SpectralField& Q0,
                                           std::optional<double> ball_radius, double gamma, int iterations, int tail);

struct ErrorEstimateCertificate {
  struct Level {
    double delta = 0.0;
    double alpha = 0.0;
    double q_error = 0.0;        ///< ||Q* - Q_min||_H1
    double c_error = 0.0;        ///< ||c* - c_min||_L2
    double q_noise_error = 0.0;  ///< ||Q_min(delta) - Q_min(0)||_H1
    double c_noise_error = 0.0;  ///< ||c_min(delta) - c_min(0)||_L2
    bool q_at_floor = false;     ///< q_error within 25% of q_floor
    bool c_at_floor = false;
  };
  double xi = 0.04;
  std::uint64_t seed = 0;
  double q_floor = 0.0;  ///< ||Q* - Q_min(0)|| from noiseless data
  double c_floor = 0.0;
  std::vector<Level> levels;
  double q_slope = 0.0;
  double c_slope = 0.0;
  bool monotone = false;
  bool passed = false;

  std::string to_json() const;
};

/// Runs the inversion for each noise level with alpha = xi delta^2 and for
/// noiseless data (alpha = 0). Errors against the oracle must not increase as
/// delta decreases (down to the noiseless floor), and the noise-induced part
/// of the error must scale at least like delta^0.8 in a log-log fit.
ErrorEstimateCertificate certify_error_estimate(const ExperimentConfig& base, std::span<const double> noise_levels,
                                                std::uint64_t seed, double xi = 0.04);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace cvxscat
