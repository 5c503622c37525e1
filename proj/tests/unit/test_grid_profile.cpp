#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "cvxscat/csv.hpp"
#include "cvxscat/error.hpp"
#include "cvxscat/grid.hpp"
#include "cvxscat/profile.hpp"
#include "cvxscat/rng.hpp"

using namespace cvxscat;

TEST(SpatialGrid, EndpointsAreExact) {
  const SpatialGrid g(0.0, 0.3, 30);
  EXPECT_EQ(g.node_count(), 31);
  EXPECT_EQ(g.node(0), 0.0);
  EXPECT_EQ(g.node(30), 0.3);
  EXPECT_NEAR(g.spacing(), 0.01, 1e-15);
  EXPECT_EQ(g.find_node(0.15), 15);
  EXPECT_EQ(g.find_node(0.155), -1);
  EXPECT_EQ(g.find_node(-0.01), -1);
}

TEST(SpatialGrid, RejectsBadInput) {
  EXPECT_THROW(SpatialGrid(0.3, 0.0, 10), DomainError);
  EXPECT_THROW(SpatialGrid(0.0, 0.3, 0), DomainError);
}

TEST(WavenumberGrid, ValuesAndWeights) {
  const WavenumberGrid k(1.0, 3.0, 11);
  EXPECT_EQ(k.size(), 11);
  EXPECT_EQ(k[0], 1.0);
  EXPECT_EQ(k[10], 3.0);
  EXPECT_NEAR(k[5], 2.0, 1e-15);
  const auto w = k.trapezoid_weights();
  double total = 0.0;
  for (double x : w) total += x;
  EXPECT_NEAR(total, 2.0, 1e-14);
  EXPECT_NEAR(w.front(), 0.1, 1e-15);
}

TEST(WavenumberGrid, RejectsNonPositiveOrDegenerate) {
  EXPECT_THROW(WavenumberGrid(0.0, 3.0, 11), DomainError);
  EXPECT_THROW(WavenumberGrid(-1.0, 3.0, 11), DomainError);
  EXPECT_THROW(WavenumberGrid(1.0, 3.0, 1), DomainError);
  EXPECT_THROW(WavenumberGrid(3.0, 1.0, 11), DomainError);
}

TEST(MediumProfile, StepGaussianAndOutsideSupport) {
  const auto step = MediumProfile::step(0.1, 0.2, 3.0);
  EXPECT_EQ(step(0.15), 4.0);
  EXPECT_EQ(step(0.05), 1.0);
  EXPECT_EQ(step(-1.0), 1.0);
  EXPECT_EQ(step(0.6), 1.0);
  EXPECT_EQ(step.upper_bound(), 4.0);

  const auto gauss = MediumProfile::gaussian(0.1, 0.04, 3.0);
  EXPECT_DOUBLE_EQ(gauss(0.1), 4.0);
  EXPECT_NEAR(gauss(0.14), 1.0 + 3.0 * std::exp(-1.0), 1e-14);
  EXPECT_EQ(gauss(0.51), 1.0);
  EXPECT_EQ(MediumProfile::homogeneous().contrast(0.2), 0.0);
}

TEST(MediumProfile, TabulatedInterpolatesLinearly) {
  const auto p = MediumProfile::tabulated({0.0, 0.1, 0.2}, {1.0, 3.0, 1.0});
  EXPECT_DOUBLE_EQ(p(0.05), 2.0);
  EXPECT_DOUBLE_EQ(p(0.1), 3.0);
  EXPECT_EQ(p(0.25), 1.0);
  EXPECT_THROW(MediumProfile::tabulated({0.0, 0.0}, {1.0, 1.0}), DomainError);
}

TEST(Rng, DeterministicAndInOpenInterval) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const double x = a.symmetric();
    EXPECT_EQ(x, b.symmetric());
    EXPECT_GT(x, -1.0);
    EXPECT_LT(x, 1.0);
    differs = differs || x != c.symmetric();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(Rng::kRngAlgorithm, "mt19937_64/u53-symmetric/v1");
}

TEST(Rng, FirstDrawIsPinned) {
  // mt19937_64 output is fixed by the standard; the 53-bit recipe must not drift.
  std::mt19937_64 e(1);
  Rng r(1);
  EXPECT_EQ(r.unit(), static_cast<double>(e() >> 11) * 0x1.0p-53);
}

TEST(Csv, RoundTripsSeventeenDigits) {
  const auto path = std::filesystem::temp_directory_path() / "cvxscat_csv_roundtrip.csv";
  CsvTable t;
  t.header = {"x", "y"};
  t.rows = {{0.1, 1.0 / 3.0}, {2e-300, -7.25}};
  write_csv(path, t);
  const CsvTable back = read_csv(path);
  ASSERT_EQ(back.header, t.header);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0][1], 1.0 / 3.0);
  EXPECT_EQ(back.rows[1][0], 2e-300);
  EXPECT_EQ(back.column("y"), 1u);
  EXPECT_THROW(back.column("z"), ContractError);
}
