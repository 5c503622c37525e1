#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cvxscat/error.hpp"
#include "cvxscat/experiment.hpp"
#include "cvxscat/optimize.hpp"
#include "test_util.hpp"

using namespace cvxscat;
using cvxscat::testing::random_q;

namespace {

const SpatialGrid kGrid(0.0, 0.3, 30);

// G = 0 makes the functional an exact quadratic in Q.
CarlemanObjective quadratic_surrogate() {
  auto coeffs = GalerkinCoefficients::zeros(2);
  coeffs.M << 0.5, 1.2, 0.0, 0.5;
  BoundaryVectors bv{Eigen::Vector4d(1.0, -0.5, 0.2, 0.3), Eigen::Vector4d(-0.4, 0.1, 0.9, 0.0)};
  SpectralField vhat = build_vhat(bv, kGrid);
  // A curved Vhat so the minimizer is not trivially zero.
  for (int m = 0; m <= 30; ++m) vhat.values().col(m) += std::sin(10.0 * kGrid.node(m)) * Eigen::Vector4d(1, 2, -1, 0.5);
  return CarlemanObjective(vhat, coeffs, {1.0, 1e-2, {}});
}

// Equal boundary vectors and a constant Vhat: the quadratic has minimum value zero,
// so cost differences stay resolvable down to tiny gradients.
CarlemanObjective consistent_surrogate() {
  auto coeffs = GalerkinCoefficients::zeros(2);
  coeffs.M << 0.5, 1.2, 0.0, 0.5;
  const Eigen::Vector4d v(1.0, -0.5, 0.2, 0.3);
  return CarlemanObjective(build_vhat({v, v}, kGrid), coeffs, {1.0, 1e-2, {}});
}

SpectralField direct_minimizer(const CarlemanObjective& obj) {
  const SpectralField zero(kGrid, obj.N());
  const Eigen::VectorXd g0 = obj.gradient(zero).interior();
  const int n = static_cast<int>(g0.size());
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i) {
    const auto e = SpectralField::from_interior(kGrid, obj.N(), Eigen::VectorXd::Unit(n, i));
    H.col(i) = obj.gradient(e).interior() - g0;
  }
  return SpectralField::from_interior(kGrid, obj.N(), H.ldlt().solve(-g0));
}

SolveTrace run(const CarlemanObjective& obj, const SpectralField& q0, const SolveOptions& opts) {
  return minimize([&](const SpectralField& q) { return obj(q); },
                  [&](const SpectralField& q) { return obj.gradient(q); }, q0, opts);
}

}  // namespace

TEST(ProjectBall, RadialScalingOnlyOutside) {
  const auto q = random_q(kGrid, 2, 1.0, 1);
  const double n = h1_norm(q);
  const auto inside = project_ball(q, 2.0 * n);
  EXPECT_TRUE((inside.values().array() == q.values().array()).all());
  const auto outside = project_ball(q, 0.5 * n);
  EXPECT_NEAR(h1_norm(outside), 0.5 * n, 1e-14);
  EXPECT_NEAR((outside.values() - 0.5 * q.values()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  const auto twice = project_ball(outside, 0.5 * n);
  EXPECT_TRUE((twice.values().array() == outside.values().array()).all());
  const SpectralField zero(kGrid, 2);
  EXPECT_EQ(h1_norm(project_ball(zero, 1.0)), 0.0);
  EXPECT_THROW(project_ball(q, 0.0), DomainError);
}

TEST(Minimize, QuasiNewtonSolvesQuadraticSurrogate) {
  const auto obj = consistent_surrogate();
  const auto qstar = direct_minimizer(obj);
  SolveOptions opts;
  opts.grad_tol = 1e-10;
  opts.max_iter = 5000;
  const auto trace = run(obj, random_q(kGrid, 2, 5.0, 21), opts);
  EXPECT_EQ(trace.termination, Termination::Converged);
  EXPECT_LT(obj.gradient(trace.solution()).interior().norm(), 1e-10);
  EXPECT_LT(h1_norm(trace.solution() - qstar), 1e-8 * (1.0 + h1_norm(qstar)));
}

TEST(Minimize, QuasiNewtonWithoutPreconditionerAlsoConverges) {
  const auto obj = quadratic_surrogate();
  SolveOptions opts;
  opts.grad_tol = 1e-8;
  opts.max_iter = 20000;
  opts.h1_preconditioner = false;
  const auto trace = run(obj, SpectralField(kGrid, 2), opts);
  EXPECT_NE(trace.termination, Termination::MaxIterations);
  EXPECT_LT(h1_norm(trace.solution() - direct_minimizer(obj)), 1e-4);
}

TEST(Minimize, GradientProjectionContractsOnSurrogate) {
  const auto obj = quadratic_surrogate();
  const auto qstar = direct_minimizer(obj);
  const double R = 2.0 * h1_norm(qstar);
  const auto lip = estimate_gradient_lipschitz(obj, R, 50, 3);
  SolveOptions opts;
  opts.method = Method::GradientProjection;
  opts.gamma = 1.0 / (2.0 * lip.max_ratio);
  opts.max_iter = 200;
  opts.ball_radius = R;
  opts.reference = qstar;
  opts.grad_tol = 1e-300;
  const auto trace = run(obj, SpectralField(kGrid, 2), opts);
  const auto ratios = trace.contraction_ratios();
  ASSERT_EQ(ratios.size(), 200u);
  for (double q : ratios) EXPECT_LT(q, 1.0);
  EXPECT_LT(*trace.records.back().distance_to_reference, *trace.records.front().distance_to_reference);
}

TEST(Minimize, AcceptedStepsStrictlyDecreaseCost) {
  const auto cfg = example_config("example1");
  const auto sd = simulate_data(make_profile(cfg.profile), make_kgrid(cfg), cfg.x0, cfg.noise_level, cfg.seed);
  const auto problem = setup_inversion(sd, cfg);
  SolveOptions opts;
  opts.max_iter = 300;
  const auto trace = run(problem.objective, SpectralField(problem.grid(), cfg.N), opts);
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    if (trace.records[i].step_accepted) EXPECT_LT(trace.records[i].cost, trace.records[i - 1].cost);
  }
}

TEST(Minimize, BallConstrainedIteratesStayInBall) {
  const auto obj = quadratic_surrogate();
  const double R = 0.5 * h1_norm(direct_minimizer(obj));
  SolveOptions opts;
  opts.ball_radius = R;
  opts.max_iter = 500;
  const auto trace = minimize([&](const SpectralField& q) { return obj(q); },
                              [&](const SpectralField& q) { return obj.gradient(q); }, SpectralField(kGrid, 2), opts,
                              [&](const IterationRecord&, const SpectralField& q) {
                                EXPECT_LE(h1_norm(q), R * (1.0 + 1e-12));
                              });
  EXPECT_NEAR(h1_norm(trace.solution()), R, 1e-9 * R);
}

TEST(Minimize, NaNCostRaises) {
  const CostFn nan_cost = [](const SpectralField&) { return std::numeric_limits<double>::quiet_NaN(); };
  const GradFn grad = [](const SpectralField& q) { return q; };
  EXPECT_THROW(minimize(nan_cost, grad, SpectralField(kGrid, 1), {}), NumericalFailure);
}

TEST(Minimize, InconsistentGradientStalls) {
  const CostFn flat = [](const SpectralField&) { return 1.0; };
  const GradFn grad = [](const SpectralField& q) {
    SpectralField g(q.grid(), q.N());
    g.values().middleCols(1, q.grid().n_cells() - 1).setOnes();
    return g;
  };
  const auto trace = minimize(flat, grad, SpectralField(kGrid, 1), {});
  EXPECT_EQ(trace.termination, Termination::Stalled);
  EXPECT_FALSE(trace.records.back().step_accepted);
  EXPECT_TRUE(trace.Q_min.has_value());
}

TEST(Minimize, RejectsBadStart) {
  const auto obj = quadratic_surrogate();
  SpectralField q(kGrid, 2);
  q(0, 0) = 1.0;
  EXPECT_THROW(run(obj, q, {}), ContractError);
  SolveOptions opts;
  opts.ball_radius = 1e-3;
  EXPECT_THROW(run(obj, random_q(kGrid, 2, 1.0, 2), opts), ContractError);
  SolveOptions gp;
  gp.method = Method::GradientProjection;
  EXPECT_THROW(run(obj, SpectralField(kGrid, 2), gp), ContractError);
}

TEST(Method, StringRoundTrip) {
  EXPECT_EQ(method_from_string(to_string(Method::QuasiNewton)), Method::QuasiNewton);
  EXPECT_EQ(method_from_string(to_string(Method::GradientProjection)), Method::GradientProjection);
  EXPECT_THROW(method_from_string("newton"), ConfigError);
}
