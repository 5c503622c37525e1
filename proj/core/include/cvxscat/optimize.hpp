#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cvxscat/data.hpp"

namespace cvxscat {

enum class Method { QuasiNewton, GradientProjection };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct SolveOptions {
  Method method = Method::QuasiNewton;
  int max_iter = 2000;
  /// Stop when the Euclidean gradient norm over the free variables drops below
  /// this. With a ball, the outward radial part is removed first on the sphere. Unset means 1e-8 * (1 + |J(Q0)|).
  std::optional<double> grad_tol;
  /// Fixed step for gradient projection.
  double gamma = 0.0;
  /// Number of (s, y) pairs kept by L-BFGS.
  int memory = 10;
  /// Radius of the centered H1 ball; unset means unconstrained.
  std::optional<double> ball_radius;
  /// Use the discrete H1 Gram matrix as the initial inverse Hessian in L-BFGS.
  bool h1_preconditioner = true;
  /// When set, each record stores ||Q^(n) - reference||_H1.
  std::optional<SpectralField> reference;

  void validate() const;
};

enum class Termination { Converged, MaxIterations, Stalled };

std::string to_string(Termination t);

struct IterationRecord {
  int iter = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  bool step_accepted = true;
  double step = 0.0;
  std::optional<double> distance_to_reference;
};

struct SolveTrace {
  std::vector<IterationRecord> records;
  std::optional<SpectralField> Q_min;
  Termination termination = Termination::MaxIterations;
  double grad_tol = 0.0;

  const SpectralField& solution() const { return *Q_min; }
  /// Ratios ||Q^(n+1) - ref|| / ||Q^(n) - ref|| from the recorded distances.
  std::vector<double> contraction_ratios() const;
};

using CostFn = std::function<double(const SpectralField&)>;
using GradFn = std::function<SpectralField(const SpectralField&)>;
using IterationCallback = std::function<void(const IterationRecord&, const SpectralField&)>;

/// Orthogonal projection onto {||Q||_H1 <= R}: radial scaling when outside.
SpectralField project_ball(const SpectralField& Q, double R);

/// Minimizes cost over the interior nodes of Q0 (boundary columns stay zero).
///
/// QuasiNewton: L-BFGS with Armijo backtracking (halving, c1 = 1e-4, at most
/// 40 halvings before reporting a stall); with a ball radius every trial point
/// is projected. GradientProjection: Q <- P[Q - gamma J'(Q)] with the H1
/// gradient and a fixed gamma. A NaN cost raises NumericalFailure.
SolveTrace minimize(const CostFn& cost_fn, const GradFn& grad_fn, const SpectralField& Q0, const SolveOptions& opts,
                    const IterationCallback& on_iteration = {});

}  // namespace cvxscat
