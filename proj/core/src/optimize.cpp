#include "cvxscat/optimize.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "cvxscat/error.hpp"
#include "cvxscat/functional.hpp"

namespace cvxscat {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;

double checked(double f, int iter) {
  if (std::isnan(f)) {
    std::ostringstream os;
    os << "minimize: cost is NaN at iteration " << iter;
    throw NumericalFailure(os.str());
  }
  return f;
}

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Euclidean gradient with the outward radial part removed when Q sits on the
// sphere of radius R; equals g in the interior of the ball.
Eigen::VectorXd tangential_gradient(const SpectralField& Q, const SpectralField& G, std::optional<double> R) {
  Eigen::VectorXd g = G.interior();
  if (!R) return g;
  const double norm = h1_norm(Q);
  if (norm < *R * (1.0 - 1e-10)) return g;
  const double outward = -h1_inner(h1_riesz(G), Q);
  if (outward <= 0.0) return g;
  // A Q, the Euclidean form of the H1 functional <Q, .>, is half the regularizer gradient.
  const Eigen::VectorXd aq = 0.5 * regularizer_gradient(Q).interior();
  return g + (outward / (norm * norm)) * aq;
}

}  // namespace

std::string to_string(Method m) { return m == Method::QuasiNewton ? "quasi-newton" : "gradient-projection"; }

Method method_from_string(const std::string& s) {
  if (s == "quasi-newton") return Method::QuasiNewton;
  if (s == "gradient-projection") return Method::GradientProjection;
  throw ConfigError("unknown optimizer method '" + s + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::MaxIterations:
      return "max_iterations";
    case Termination::Stalled:
      return "stalled";
  }
  return "unknown";
}

void SolveOptions::validate() const {
  if (max_iter < 0) throw ContractError("SolveOptions: max_iter must be nonnegative");
  if (grad_tol && !(*grad_tol > 0.0)) throw ContractError("SolveOptions: grad_tol must be positive");
  if (method == Method::GradientProjection && !(gamma > 0.0)) {
    throw ContractError("SolveOptions: gradient projection needs gamma > 0");
  }
  if (memory < 1) throw ContractError("SolveOptions: memory must be at least 1");
  if (ball_radius && !(*ball_radius > 0.0)) throw ContractError("SolveOptions: ball radius must be positive");
}

std::vector<double> SolveTrace::contraction_ratios() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& prev = records[i - 1].distance_to_reference;
    const auto& cur = records[i].distance_to_reference;
    if (prev && cur && *prev > 0.0) out.push_back(*cur / *prev);
  }
  return out;
}

SpectralField project_ball(const SpectralField& Q, double R) {
  if (!(R > 0.0)) throw DomainError("project_ball: radius must be positive");
  const double norm = h1_norm(Q);
  if (norm <= R) return Q;
  return (R / norm) * Q;
}

SolveTrace minimize(const CostFn& cost_fn, const GradFn& grad_fn, const SpectralField& Q0, const SolveOptions& opts,
                    const IterationCallback& on_iteration) {
  opts.validate();
  if (!Q0.boundary_is_zero()) throw ContractError("minimize: initial guess must vanish at both ends");
  if (opts.ball_radius && h1_norm(Q0) > *opts.ball_radius * (1.0 + 1e-12)) {
    throw ContractError("minimize: initial guess lies outside the ball");
  }

  const SpatialGrid& grid = Q0.grid();
  const int N = Q0.N();
  auto to_field = [&](const Eigen::VectorXd& x) { return SpectralField::from_interior(grid, N, x); };
  auto project = [&](const SpectralField& q) { return opts.ball_radius ? project_ball(q, *opts.ball_radius) : q; };
  auto distance = [&](const SpectralField& q) -> std::optional<double> {
    if (!opts.reference) return std::nullopt;
    return h1_norm(q - *opts.reference);
  };

  SolveTrace trace;
  SpectralField Q = Q0;
  double f = checked(cost_fn(Q), 0);
  SpectralField G = grad_fn(Q);
  Eigen::VectorXd g = G.interior();
  double stationarity = tangential_gradient(Q, G, opts.ball_radius).norm();
  trace.grad_tol = opts.grad_tol.value_or(1e-8 * (1.0 + std::abs(f)));

  auto record = [&](int iter, bool accepted, double step) {
    IterationRecord rec{iter, f, stationarity, accepted, step, distance(Q)};
    trace.records.push_back(rec);
    if (on_iteration) on_iteration(rec, Q);
  };
  record(0, true, 0.0);

  if (opts.method == Method::GradientProjection) {
    for (int it = 1; it <= opts.max_iter; ++it) {
      if (stationarity < trace.grad_tol) {
        trace.termination = Termination::Converged;
        break;
      }
      Q = project(Q - opts.gamma * h1_riesz(G));
      f = checked(cost_fn(Q), it);
      G = grad_fn(Q);
      g = G.interior();
      stationarity = tangential_gradient(Q, G, opts.ball_radius).norm();
      record(it, true, opts.gamma);
    }
    if (stationarity < trace.grad_tol) trace.termination = Termination::Converged;
    trace.Q_min = Q;
    return trace;
  }

  // L-BFGS two-loop recursion; H0 = scale * A^{-1} with A the H1 Gram matrix
  // when preconditioning, else scale * I.
  auto apply_h0 = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (!opts.h1_preconditioner) return v;
    return h1_riesz(to_field(v)).interior();
  };

  auto steepest = [&]() -> Eigen::VectorXd {
    Eigen::VectorXd d = -apply_h0(g);
    const double dn = std::sqrt(std::abs(d.dot(g)));
    if (dn > 1.0) d /= dn;
    return d;
  };

  std::deque<CurvaturePair> pairs;
  Eigen::VectorXd x = Q.interior();
  for (int it = 1; it <= opts.max_iter; ++it) {
    if (stationarity < trace.grad_tol) {
      trace.termination = Termination::Converged;
      break;
    }

    Eigen::VectorXd d;
    if (pairs.empty()) {
      d = steepest();
    } else {
      Eigen::VectorXd q = g;
      std::vector<double> alpha(pairs.size());
      for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
        alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
        q -= alpha[i] * pairs[i].y;
      }
      const CurvaturePair& last = pairs.back();
      const Eigen::VectorXd h0y = apply_h0(last.y);
      const double scale = last.s.dot(last.y) / last.y.dot(h0y);
      Eigen::VectorXd z = scale * apply_h0(q);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double beta = pairs[i].rho * pairs[i].y.dot(z);
        z += (alpha[i] - beta) * pairs[i].s;
      }
      d = -z;
    }
    if (!(d.dot(g) < 0.0)) {
      pairs.clear();
      d = steepest();
    }

    auto search = [&](const Eigen::VectorXd& dir, double& step, SpectralField& trial, double& f_trial) {
      step = 1.0;
      for (int bt = 0; bt <= kMaxBacktracks; ++bt) {
        trial = project(to_field(x + step * dir));
        f_trial = checked(cost_fn(trial), it);
        const double decrease = g.dot(trial.interior() - x);
        if (f_trial < f && f_trial <= f + kArmijo * decrease) return true;
        step *= 0.5;
      }
      return false;
    };

    double step = 1.0;
    SpectralField trial = Q;
    double f_trial = f;
    bool accepted = search(d, step, trial, f_trial);
    if (!accepted && !pairs.empty()) {
      // The quasi-Newton model can be poor after projections; retry along the
      // preconditioned gradient with a fresh memory.
      pairs.clear();
      accepted = search(steepest(), step, trial, f_trial);
    }
    if (!accepted) {
      record(it, false, step);
      trace.termination = Termination::Stalled;
      trace.Q_min = Q;
      return trace;
    }

    const Eigen::VectorXd x_new = trial.interior();
    SpectralField G_new = grad_fn(trial);
    const Eigen::VectorXd g_new = G_new.interior();
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      pairs.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(pairs.size()) > opts.memory) pairs.pop_front();
    }
    x = x_new;
    Q = std::move(trial);
    f = f_trial;
    G = std::move(G_new);
    g = g_new;
    stationarity = tangential_gradient(Q, G, opts.ball_radius).norm();
    record(it, true, step);
  }
  if (stationarity < trace.grad_tol) trace.termination = Termination::Converged;
  trace.Q_min = Q;
  return trace;
}

}  // namespace cvxscat
