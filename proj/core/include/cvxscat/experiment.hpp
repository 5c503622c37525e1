#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cvxscat/basis.hpp"
#include "cvxscat/data.hpp"
#include "cvxscat/forward.hpp"
#include "cvxscat/functional.hpp"
#include "cvxscat/optimize.hpp"
#include "cvxscat/profile.hpp"
#include "cvxscat/reconstruct.hpp"

namespace cvxscat {

struct ProfileSpec {
  /// step | gaussian | homogeneous | tabulated
  std::string kind = "step";
  double left = 0.1;
  double right = 0.2;
  double amplitude = 3.0;
  double center = 0.1;
  double width = 0.04;
  double support_end = 0.5;
  /// CSV with columns x,c for the tabulated kind.
  std::string file;
};

struct OptimizerSpec {
  Method method = Method::QuasiNewton;
  int max_iter = 2000;
  std::optional<double> grad_tol;
  /// Gradient-projection step; unset means 1 / (2 D) with D the sampled Lipschitz constant.
  std::optional<double> gamma;
  int memory = 10;
  bool use_ball = false;
  /// Unset with use_ball means 2 ||Q*||_H1 (simulated data only).
  std::optional<double> ball_radius;
  bool h1_preconditioner = true;
};

/// Everything needed to reproduce one experiment. Defaults are the
/// reference settings: k in [1, 3] with 11 wavenumbers, N = 3, lambda = 1,
/// alpha = 1e-4, 5% noise, reconstruction on [0, 0.3] with h = 0.01, Q0 = 0.
struct ExperimentConfig {
  std::string name = "custom";
  ProfileSpec profile;
  double k_min = 1.0;
  double k_max = 3.0;
  int K = 11;
  double x0 = -0.1;
  double forward_h = 1e-3;
  double b = 0.3;
  int n_cells = 30;
  int N = 3;
  double lambda = 1.0;
  double alpha = 1e-4;
  double noise_level = 0.05;
  NoiseMode noise_mode = NoiseMode::Real;
  std::uint64_t seed = 1;
  OptimizerSpec optimizer;
  /// zero | exact (Q0 = V* - Vhat*, simulated data only)
  std::string initial_guess = "zero";
  bool certificates = false;
  std::string output_dir = "out";

  void validate() const;
};

/// example1: 1 + 3 chi[0.1, 0.2]; example2: 1 + 6 chi[0.15, 0.25];
/// example3: 1 + 3 exp(-(x - 0.1)^2 / 0.04^2); homogeneous: c = 1.
ExperimentConfig example_config(const std::string& name);

/// Parses a JSON config layered over `base`. Unknown keys and type mismatches
/// raise ConfigError.
ExperimentConfig config_from_json(const std::string& text, const ExperimentConfig& base = {});
std::string config_to_json(const ExperimentConfig& cfg);
/// Applies one "dotted.key=value" override; value is parsed as JSON when possible.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

MediumProfile make_profile(const ProfileSpec& spec);
WavenumberGrid make_kgrid(const ExperimentConfig& cfg);
SpatialGrid make_reconstruction_grid(const ExperimentConfig& cfg);

/// Data-dependent pieces of one inversion (algorithm steps 1-2).
struct InversionProblem {
  SpectralBasis basis;
  GalerkinCoefficients coeffs;
  BoundaryVectors boundary;
  CarlemanObjective objective;

  const SpectralField& vhat() const { return objective.vhat(); }
  const SpatialGrid& grid() const { return objective.grid(); }
};

InversionProblem setup_inversion(const ScatterData& data, const ExperimentConfig& cfg);

/// Noise-free reference quantities available when the coefficient is known.
struct Oracle {
  SpectralField V_star;
  SpectralField vhat_star;
  /// V* - Vhat* with the end columns set to zero.
  SpectralField Q_star;
  /// Coefficient recovered from V* at k_min, before clipping.
  std::vector<double> c_star;
  double truncation_residual = 0.0;
};

Oracle compute_oracle(const MediumProfile& profile, const ExperimentConfig& cfg, const SpectralBasis& basis);

struct InversionResult {
  SolveTrace trace;
  SpectralField V;
  CoefficientEstimate raw;
  std::vector<double> c;  ///< clipped
  double k_stability = 0.0;
  double gamma = 0.0;
  std::optional<double> ball_radius;
};

/// Algorithm steps 3-4: minimize from Q0, form V = Q + Vhat, evaluate the
/// coefficient at k_min and clip.
InversionResult invert(const InversionProblem& problem, const ExperimentConfig& cfg, const SpectralField& Q0,
                       std::optional<double> ball_radius = std::nullopt, const IterationCallback& on_iteration = {});

struct ReconstructionMetrics {
  double argmax = 0.0;
  double true_center = 0.0;
  double peak_contrast = 0.0;
  double true_peak_contrast = 0.0;
  double relative_l2 = 0.0;
  double imag_ratio = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  ScatterData data;
  InversionProblem problem;
  Oracle oracle;
  InversionResult inversion;
  std::vector<double> c_true;
  ReconstructionMetrics metrics;
};

/// Simulates data for cfg.profile, builds the oracle, and runs the inversion.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const IterationCallback& on_iteration = {});

/// Runs an experiment and writes c_reconstructed.csv, V_fields.csv, vhat.csv,
/// q.csv, v_exact.csv, trace.jsonl, summary.json and config_resolved.json into
/// `out_dir` (plus certificates/ when cfg.certificates). Returns the result.
ExperimentResult run_and_write(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Returns 0 and writes artifacts for example1..example3 (or homogeneous).
int run_example(const std::string& name, const ExperimentConfig& overrides_applied,
                const std::filesystem::path& out_dir);

struct InvarianceReport {
  double relative_distance = 0.0;
  std::vector<double> c_from_zero;
  std::vector<double> c_from_exact;
  Termination termination_zero = Termination::MaxIterations;
  Termination termination_exact = Termination::MaxIterations;
  double solution_distance = 0.0;  ///< ||Q_zero - Q_exact||_H1 / ||Q_zero||_H1
  std::string to_json() const;
};

/// Inverts the same data from Q0 = 0 and from Q0 = Q*, comparing the clipped coefficients.
InvarianceReport run_invariance_study(const ExperimentConfig& cfg);

/// Field CSV: columns x, V1..V2N.
void write_field_csv(const std::filesystem::path& path, const SpectralField& field);
SpectralField read_field_csv(const std::filesystem::path& path);

/// Data CSV: k, Re g, Im g, Re g1, Im g1, Re v0, Im v0 (plus data_meta.json alongside).
void write_data_csv(const std::filesystem::path& path, const ScatterData& data);
ScatterData read_data_csv(const std::filesystem::path& path, double x0);

}  // namespace cvxscat
