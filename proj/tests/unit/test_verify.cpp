#include <gtest/gtest.h>

#include <cmath>

#include "cvxscat/experiment.hpp"
#include "cvxscat/verify.hpp"

using namespace cvxscat;

namespace {

const SpatialGrid kGrid(0.0, 0.3, 30);

CarlemanObjective example_objective(double lambda = 1.0) {
  auto cfg = example_config("example1");
  cfg.lambda = lambda;
  const auto sd = simulate_data(make_profile(cfg.profile), make_kgrid(cfg), cfg.x0, cfg.noise_level, cfg.seed);
  return setup_inversion(sd, cfg).objective;
}

}  // namespace

TEST(CarlemanSides, LinearFunctionClosedForm) {
  std::vector<double> h(31);
  for (int m = 0; m <= 30; ++m) h[m] = kGrid.node(m);
  const auto sides = carleman_sides(kGrid, h, 1.0);
  const double lhs = (1.0 - std::exp(-0.6)) / 2.0;
  const double rhs = 0.25 - std::exp(-0.6) * (0.045 + 0.15 + 0.25);
  EXPECT_NEAR(sides.lhs, lhs, 1e-3 * lhs);
  EXPECT_NEAR(sides.rhs, rhs, 1e-3 * rhs);
}

TEST(CarlemanSides, ZeroFunction) {
  const std::vector<double> h(31, 0.0);
  const auto sides = carleman_sides(kGrid, h, 3.0);
  EXPECT_EQ(sides.lhs, 0.0);
  EXPECT_EQ(sides.rhs, 0.0);
}

TEST(CarlemanCertificate, PassesAndIsDeterministic) {
  const std::vector<double> lambdas{1.0, 5.0, 10.0};
  const auto a = certify_carleman(kGrid, lambdas, 50, 3);
  const auto b = certify_carleman(kGrid, lambdas, 50, 3);
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.to_json(), b.to_json());
  ASSERT_EQ(a.per_lambda.size(), 3u);
  for (const auto& p : a.per_lambda) EXPECT_GT(p.min_scaled_margin, 0.0);
}

TEST(ConvexityCertificate, PassesOnExampleBall) {
  const auto obj = example_objective();
  const std::vector<double> lambdas{0.0, 1.0};
  const auto cert = certify_convexity(obj, 2.7, lambdas, 40, 11);
  EXPECT_TRUE(cert.passed);
  EXPECT_EQ(cert.per_lambda.size(), 2u);
  for (const auto& p : cert.per_lambda) EXPECT_EQ(p.negative_gaps, 0);
  EXPECT_EQ(cert.to_json(), certify_convexity(obj, 2.7, lambdas, 40, 11).to_json());
}

TEST(GradientCertificate, PassesOnExample) {
  const auto cert = certify_gradient(example_objective(), 2.7, 20, 5);
  EXPECT_TRUE(cert.passed);
  EXPECT_LT(cert.max_relative_error, 1e-5);
  ASSERT_FALSE(cert.ladder.empty());
}

TEST(LipschitzCertificate, ReproducibleUnderResampling) {
  const auto cert = certify_lipschitz(example_objective(), 2.7, 100, 7);
  EXPECT_TRUE(cert.passed);
  EXPECT_GT(cert.max_ratio, 0.0);
}

TEST(ContractionCertificate, GradientProjectionContracts) {
  const auto obj = example_objective();
  const double D = estimate_gradient_lipschitz(obj, 2.7, 50, 1).max_ratio;
  const auto cert = certify_contraction(obj, SpectralField(kGrid, 3), 2.7, 1.0 / (2.0 * D), 60, 30);
  EXPECT_TRUE(cert.passed);
  EXPECT_EQ(cert.tail_ratios.size(), 30u);
  EXPECT_LT(cert.q_max, 1.0);
}

TEST(LogLogSlope, RecoversPowerLaw) {
  const std::vector<double> x{0.1, 0.05, 0.025};
  const std::vector<double> y{0.02, 0.005, 0.00125};
  EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-12);
  const std::vector<double> bad{0.1, 0.0, 0.2};
  EXPECT_TRUE(std::isnan(loglog_slope(x, bad)));
}
