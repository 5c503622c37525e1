#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "cvxscat/error.hpp"
#include "cvxscat/experiment.hpp"
#include "cvxscat/reconstruct.hpp"
#include "cvxscat/rng.hpp"

using namespace cvxscat;

namespace {

const WavenumberGrid kData(1.0, 3.0, 11);
const SpatialGrid kGrid(0.0, 0.3, 30);

// Field whose synthesis at k equals phi(x): V_n = phi(x) f_n(k) / |f(k)|^2.
SpectralField field_with_synthesis(const SpectralBasis& basis, double k, const std::function<cplx(double)>& phi) {
  const int N = basis.size();
  Eigen::VectorXd f(N);
  for (int n = 0; n < N; ++n) f(n) = basis.value(n, k);
  const Eigen::VectorXd w = f / f.squaredNorm();
  SpectralField V(kGrid, N);
  for (int m = 0; m <= 30; ++m) {
    const cplx p = phi(kGrid.node(m));
    V.values().col(m).head(N) = p.real() * w;
    V.values().col(m).tail(N) = p.imag() * w;
  }
  return V;
}

Oracle oracle_for(const std::string& name) {
  const auto cfg = example_config(name);
  return compute_oracle(make_profile(cfg.profile), cfg, build_basis(make_kgrid(cfg), cfg.N));
}

}  // namespace

TEST(Coefficient, HomogeneousLogDerivativeGivesUnity) {
  const auto basis = build_basis(kData, 3);
  for (double k : {1.0, 2.2, 3.0}) {
    const auto V = field_with_synthesis(basis, k, [&](double) { return cplx(0.0, -1.0 / k); });
    const auto est = coefficient_from_field(V, basis, k);
    for (int m = 0; m <= 30; ++m) {
      EXPECT_NEAR(est.c[m], 1.0, 1e-12);
      EXPECT_NEAR(est.c_imag[m], 0.0, 1e-12);
    }
    EXPECT_NEAR(est.imag_ratio, 0.0, 1e-12);
  }
}

TEST(Coefficient, LinearSynthesisClosedForm) {
  const auto basis = build_basis(kData, 3);
  const double k = 1.5;
  const auto V = field_with_synthesis(basis, k, [&](double x) { return cplx(0.5 * x, -1.0 / k); });
  const auto est = coefficient_from_field(V, basis, k);
  for (int m = 0; m <= 30; ++m) {
    const double x = kGrid.node(m);
    EXPECT_NEAR(est.c[m], 0.5 - 0.25 * k * k * x * x, 1e-11);
    EXPECT_NEAR(est.c_imag[m], k * x, 1e-11);
  }
}

TEST(Coefficient, RejectsMismatchedInputs) {
  const auto basis = build_basis(kData, 3);
  EXPECT_THROW(coefficient_from_field(SpectralField(kGrid, 2), basis, 1.0), ContractError);
  EXPECT_THROW(coefficient_from_field(SpectralField(kGrid, 3), basis, 3.5), DomainError);
}

TEST(Clip, PointwiseMaxWithOne) {
  const std::vector<double> c{-2.0, 0.5, 1.0, 1.7, 30.0};
  EXPECT_EQ(clip_to_physical(c), (std::vector<double>{1.0, 1.0, 1.0, 1.7, 30.0}));
}

TEST(Clip, NeverIncreasesErrorAgainstPhysicalCoefficient) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> truth(31), c(31);
    for (int m = 0; m <= 30; ++m) {
      truth[m] = 1.0 + 4.0 * rng.unit();
      c[m] = truth[m] + 3.0 * rng.symmetric();
    }
    EXPECT_LE(relative_l2_error(clip_to_physical(c), truth, kGrid), relative_l2_error(c, truth, kGrid) + 1e-15);
  }
}

TEST(Metrics, NormsAndArgmax) {
  std::vector<double> one(31, 1.0);
  EXPECT_NEAR(l2_norm(one, kGrid), std::sqrt(0.3), 1e-14);
  std::vector<double> c(31, 0.0);
  c[12] = 2.0;
  EXPECT_NEAR(argmax_location(c, kGrid), 0.12, 1e-15);
  EXPECT_EQ(relative_l2_error(one, one, kGrid), 0.0);
  EXPECT_THROW(l2_norm(std::vector<double>(3), kGrid), ContractError);
}

TEST(Metrics, SampleProfileOnNodes) {
  const auto c = sample_profile(MediumProfile::step(0.1, 0.2, 3.0), kGrid);
  EXPECT_EQ(c[5], 1.0);
  EXPECT_EQ(c[15], 4.0);
}

// The exact field truncated to three basis functions, evaluated at the lowest
// wavenumber, already localizes the inclusions.
TEST(OracleReconstruction, ExampleOneLocatesStep) {
  const auto o = oracle_for("example1");
  const double x = argmax_location(o.c_star, kGrid);
  EXPECT_GE(x, 0.08);
  EXPECT_LE(x, 0.22);
  const auto truth = sample_profile(MediumProfile::step(0.1, 0.2, 3.0), kGrid);
  EXPECT_LT(relative_l2_error(o.c_star, truth, kGrid), 0.25);
  EXPECT_LT(coefficient_from_field(o.V_star, build_basis(kData, 3), 1.0).imag_ratio, 0.2);
}

TEST(OracleReconstruction, ExampleThreeWithinThreshold) {
  const auto o = oracle_for("example3");
  const auto truth = sample_profile(MediumProfile::gaussian(0.1, 0.04, 3.0), kGrid);
  EXPECT_LT(relative_l2_error(o.c_star, truth, kGrid), 0.15);
  EXPECT_LT(relative_l2_error(clip_to_physical(o.c_star), truth, kGrid),
            relative_l2_error(o.c_star, truth, kGrid) + 1e-15);
}

TEST(OracleReconstruction, KStabilityIsModerate) {
  const auto o = oracle_for("example1");
  EXPECT_LT(k_stability(o.V_star, build_basis(kData, 3)), 0.2);
}
