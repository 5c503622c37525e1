#include <gtest/gtest.h>

#include <filesystem>

#include "cvxscat/data.hpp"
#include "cvxscat/error.hpp"
#include "cvxscat/experiment.hpp"
#include "test_util.hpp"

using namespace cvxscat;
using cvxscat::testing::dot;

namespace {

const WavenumberGrid kData(1.0, 3.0, 11);
const SpatialGrid kGrid(0.0, 0.3, 30);

}  // namespace

TEST(BoundaryVectors, HomogeneousDataGivesPurelyImaginaryEqualEnds) {
  const auto basis = build_basis(kData, 3);
  const auto sd = simulate_data(MediumProfile::homogeneous(), kData, -0.1, 0.0, 1);
  const auto bv = boundary_vectors(sd, basis);
  ASSERT_EQ(bv.V0.size(), 6);
  for (int n = 0; n < 3; ++n) {
    EXPECT_NEAR(bv.V0(n), 0.0, 1e-8);
    EXPECT_EQ(bv.Vb(n), 0.0);
    EXPECT_NEAR(bv.V0(n + 3), bv.Vb(n + 3), 1e-8);
  }
  const double frozen_vb[3] = {-0.68289380844925662, 0.42450581934217024, -0.15468548475821173};
  for (int n = 0; n < 3; ++n) EXPECT_NEAR(bv.Vb(n + 3), frozen_vb[n], 1e-13);
}

TEST(BoundaryVectors, ExampleOneNoiselessIsFrozen) {
  const auto basis = build_basis(kData, 3);
  const auto sd = simulate_data(MediumProfile::step(0.1, 0.2, 3.0), kData, -0.1, 0.0, 1);
  const auto bv = boundary_vectors(sd, basis);
  const double frozen[6] = {0.34493992696833775, -0.15217888813002067, 0.0079613785260474502,
                            -1.0219113385682794, 0.400222368340933,   -0.14424376363031233};
  for (int s = 0; s < 6; ++s) EXPECT_NEAR(bv.V0(s), frozen[s], 1e-10);
}

TEST(BoundaryVectors, LinearInLogDerivative) {
  const auto basis = build_basis(kData, 3);
  const auto a = simulate_data(MediumProfile::step(0.1, 0.2, 3.0), kData, -0.1, 0.0, 1);
  const auto b = simulate_data(MediumProfile::gaussian(0.1, 0.04, 3.0), kData, -0.1, 0.0, 1);
  const auto va = boundary_vectors(a, basis).V0;
  const auto vb = boundary_vectors(b, basis).V0;
  // Project 2 v0(a) - 3 v0(b) directly with the basis weights.
  const auto& F = basis.values();
  const auto& w = basis.weights();
  for (int n = 0; n < 3; ++n) {
    cplx acc = 0.0;
    for (int i = 0; i < kData.size(); ++i) acc += w(i) * F(n, i) * (2.0 * a.v0()[i] - 3.0 * b.v0()[i]);
    EXPECT_NEAR(acc.real(), 2.0 * va(n) - 3.0 * vb(n), 1e-12);
    EXPECT_NEAR(acc.imag(), 2.0 * va(n + 3) - 3.0 * vb(n + 3), 1e-12);
  }
}

TEST(Vhat, InterpolatesLinearlyBetweenEnds) {
  BoundaryVectors bv{Eigen::VectorXd::LinSpaced(4, 1.0, 4.0), Eigen::VectorXd::Constant(4, -2.0)};
  const auto vhat = build_vhat(bv, kGrid);
  ASSERT_EQ(vhat.N(), 2);
  for (int s = 0; s < 4; ++s) {
    EXPECT_EQ(vhat(s, 0), bv.V0(s));
    EXPECT_EQ(vhat(s, 30), bv.Vb(s));
    EXPECT_NEAR(vhat(s, 15), 0.5 * (bv.V0(s) + bv.Vb(s)), 1e-14);
  }
  BoundaryVectors flat{Eigen::VectorXd::Constant(2, 0.7), Eigen::VectorXd::Constant(2, 0.7)};
  const auto c = build_vhat(flat, kGrid);
  EXPECT_NEAR((c.values().array() - 0.7).abs().maxCoeff(), 0.0, 1e-15);
}

TEST(SpectralField, InteriorRoundTripAndBoundary) {
  auto q = cvxscat::testing::random_q(kGrid, 3, 2.0, 7);
  EXPECT_TRUE(q.boundary_is_zero());
  const auto back = SpectralField::from_interior(kGrid, 3, q.interior());
  EXPECT_TRUE((back.values().array() == q.values().array()).all());
  EXPECT_EQ(q.interior().size(), 6 * 29);
  EXPECT_NEAR(h1_norm(q), 0.7 * 2.0, 1e-12);
}

TEST(H1, InnerProductOfPlateau) {
  SpectralField q(kGrid, 1);
  for (int m = 1; m < 30; ++m) {
    q(0, m) = 1.0;
    q(1, m) = 2.0;
  }
  const double h = 0.01;
  const double plateau = h * 29.0 + 2.0 / h;
  EXPECT_NEAR(h1_inner(q, q), plateau * 5.0, 1e-9);
}

TEST(H1, RieszRepresenterReproducesFunctional) {
  const auto g = cvxscat::testing::random_q(kGrid, 2, 1.0, 11);
  const auto r = h1_riesz(g);
  EXPECT_TRUE(r.boundary_is_zero());
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const auto p = cvxscat::testing::random_q(kGrid, 2, 3.0, seed);
    EXPECT_NEAR(h1_inner(r, p), dot(g, p), 1e-12 * (1.0 + std::abs(dot(g, p))));
  }
}

TEST(ExactField, TruncationResidualIsSmallOnExamples) {
  const auto basis = build_basis(kData, 3);
  for (const auto& p : {MediumProfile::step(0.1, 0.2, 3.0), MediumProfile::step(0.15, 0.25, 6.0),
                        MediumProfile::gaussian(0.1, 0.04, 3.0)}) {
    const auto samples = sample_log_derivative(p, kData, kGrid, -0.1);
    const auto V = project_onto_basis(samples, basis, kGrid);
    EXPECT_LT(synthesis_residual(V, samples, basis), 0.1) << p.name();
  }
}

TEST(ExactField, HomogeneousHasNoRealPart) {
  const auto basis = build_basis(kData, 3);
  const auto V = exact_spectral_field(MediumProfile::homogeneous(), kData, basis, kGrid, -0.1);
  const auto sd = simulate_data(MediumProfile::homogeneous(), kData, -0.1, 0.0, 1);
  const auto bv = boundary_vectors(sd, basis);
  // The node x = 0 uses a one-sided difference, so it is only first-order accurate.
  for (int m = 0; m <= 30; ++m) {
    const double tol = m == 0 ? 2e-3 : 1e-5;
    for (int n = 0; n < 3; ++n) {
      EXPECT_NEAR(V(n, m), 0.0, tol);
      EXPECT_NEAR(V(n + 3, m), bv.Vb(n + 3), tol);
    }
  }
}

TEST(ExactField, OracleQVanishesOnBoundary) {
  const auto cfg = example_config("example1");
  const auto basis = build_basis(make_kgrid(cfg), cfg.N);
  const auto oracle = compute_oracle(make_profile(cfg.profile), cfg, basis);
  EXPECT_TRUE(oracle.Q_star.boundary_is_zero());
  EXPECT_NEAR(h1_norm(oracle.Q_star), 1.347, 5e-3);
}

TEST(DataCsv, RoundTripPreservesValues) {
  const auto dir = std::filesystem::temp_directory_path() / "cvxscat_data_rt";
  std::filesystem::create_directories(dir);
  const auto sd = simulate_data(MediumProfile::step(0.1, 0.2, 3.0), kData, -0.1, 0.05, 1);
  write_data_csv(dir / "data.csv", sd);
  const auto back = read_data_csv(dir / "data.csv", -0.1);
  ASSERT_EQ(back.kgrid().size(), kData.size());
  for (int i = 0; i < kData.size(); ++i) {
    EXPECT_EQ(back.g()[i], sd.g()[i]);
    EXPECT_LT(std::abs(back.v0()[i] - sd.v0()[i]), 1e-14 * std::abs(sd.v0()[i]));
  }
}

TEST(DataCsv, NoisyExampleOneIsFrozen) {
  const auto sd = simulate_data(MediumProfile::step(0.1, 0.2, 3.0), kData, -0.1, 0.05, 1);
  EXPECT_NEAR(sd.g()[0].real(), -0.13065551987397803, 1e-12);
  EXPECT_NEAR(sd.g()[0].imag(), -0.45863974751946968, 1e-12);
}

TEST(FieldCsv, RoundTripIsExact) {
  const auto path = std::filesystem::temp_directory_path() / "cvxscat_field_rt.csv";
  const auto q = cvxscat::testing::random_q(kGrid, 3, 2.0, 3);
  write_field_csv(path, q);
  const auto back = read_field_csv(path);
  EXPECT_EQ(back.grid(), kGrid);
  EXPECT_TRUE((back.values().array() == q.values().array()).all());
}
