#include <gtest/gtest.h>

#include <cmath>

#include "cvxscat/basis.hpp"
#include "cvxscat/error.hpp"

using namespace cvxscat;

namespace {

const WavenumberGrid kData(1.0, 3.0, 11);

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGlNodes[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                                0.9739065285171717};
constexpr double kGlWeights[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                  0.0666713443086881};

template <class F>
double gauss_legendre(F f, double a, double b, int panels = 40) {
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (int i = 0; i < 5; ++i) {
      const double d = 0.5 * w * kGlNodes[i];
      total += 0.5 * w * kGlWeights[i] * (f(mid - d) + f(mid + d));
    }
  }
  return total;
}

}  // namespace

TEST(Basis, DiscreteOrthonormality) {
  for (int N = 1; N <= 5; ++N) {
    const auto basis = build_basis(kData, N);
    EXPECT_LT(basis.orthonormality_residual(), 1e-10) << "N=" << N;
    EXPECT_EQ(basis.quadrature_grid(), kData);
  }
}

TEST(Basis, SingleFunctionIsNormalizedExponential) {
  const auto basis = build_basis(kData, 1);
  const auto w = kData.trapezoid_weights();
  double norm2 = 0.0;
  for (int i = 0; i < kData.size(); ++i) {
    const double t = (kData[i] - 1.0) / 2.0;
    norm2 += w[i] * std::exp(2.0 * t) / 2.0;
  }
  const double t = 0.3;
  const double k = 1.0 + 2.0 * t;
  EXPECT_NEAR(basis.value(0, k), std::exp(t) / std::sqrt(2.0) / std::sqrt(norm2), 1e-13);
  EXPECT_GT(basis.value(0, k), 0.0);
}

TEST(Basis, DerivativeMatchesFiniteDifferences) {
  const auto basis = build_basis(kData, 4);
  for (int n = 0; n < 4; ++n) {
    for (double k : {1.1, 1.9, 2.7}) {
      const double exact = basis.derivative(n, k);
      double prev = 0.0;
      for (double d : {1e-4, 1e-5}) {
        const double fd = (basis.value(n, k + d) - basis.value(n, k - d)) / (2.0 * d);
        const double err = std::abs(fd - exact);
        EXPECT_LT(err, 1e-6 * (1.0 + std::abs(exact)));
        if (d == 1e-5) EXPECT_LT(err, prev + 1e-9);
        prev = err;
      }
    }
  }
}

TEST(Basis, DenseMIsUpperTriangularWithDeterminantTwoToMinusN) {
  for (int N = 1; N <= 4; ++N) {
    const auto basis = build_basis(kData, N, QuadratureMode::Dense);
    const auto M = assemble_M(basis);
    for (int m = 0; m < N; ++m) {
      EXPECT_NEAR(M(m, m), 0.5, 1e-5) << "N=" << N;
      for (int n = 0; n < m; ++n) EXPECT_NEAR(M(m, n), 0.0, 1e-5) << "N=" << N;
    }
    EXPECT_NEAR(M.determinant(), std::pow(2.0, -N), 1e-5 * std::pow(2.0, -N) * N);
  }
}

TEST(Basis, DenseSingleEntryEqualsBoundaryTerm) {
  const auto basis = build_basis(kData, 1, QuadratureMode::Dense);
  const double f3 = basis.value(0, 3.0), f1 = basis.value(0, 1.0);
  EXPECT_NEAR(assemble_M(basis)(0, 0), 0.5 * (f3 * f3 - f1 * f1), 1e-6);
}

TEST(Basis, DenseSymmetricPartIsBoundaryProduct) {
  const auto basis = build_basis(kData, 3, QuadratureMode::Dense);
  const auto M = assemble_M(basis);
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      const double boundary = basis.value(n, 3.0) * basis.value(m, 3.0) - basis.value(n, 1.0) * basis.value(m, 1.0);
      EXPECT_NEAR(M(m, n) + M(n, m), boundary, 5e-5);
    }
  }
}

TEST(Basis, DenseGMatchesGaussLegendre) {
  const auto basis = build_basis(kData, 2, QuadratureMode::Dense);
  const auto coeffs = galerkin_coefficients(basis);
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      for (int j = 0; j < 2; ++j) {
        const double gl = gauss_legendre(
            [&](double k) {
              return (2.0 * k * basis.value(n, k) * basis.value(j, k) +
                      2.0 * k * k * basis.value(n, k) * basis.derivative(j, k)) *
                     basis.value(m, k);
            },
            1.0, 3.0);
        EXPECT_NEAR(coeffs.G(m, n, j), gl, 1e-5 * (1.0 + std::abs(gl)));
      }
    }
  }
}

TEST(Basis, DiscreteMIsFrozen) {
  const auto M = assemble_M(build_basis(kData, 3));
  const double expected[3][3] = {{0.49999999999999978, 1.881400697011701, 1.2125568547744778},
                                 {0.0, 0.50000000000000133, 3.6877722793981773},
                                 {0.0, 0.0, 0.49999999999999178}};
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) EXPECT_NEAR(M(m, n), expected[m][n], 1e-12);
  }
}

TEST(Basis, DiscreteGIsBoundedAndFrozen) {
  const auto coeffs = galerkin_coefficients(build_basis(kData, 3));
  double gmax = 0.0;
  for (double g : coeffs.G_flat) gmax = std::max(gmax, std::abs(g));
  EXPECT_LT(gmax, 1e3);
  EXPECT_NEAR(gmax, 39.344152747160607, 1e-10);
  EXPECT_TRUE(std::isfinite(coeffs.M_condition));
}

TEST(Basis, RejectsMoreFunctionsThanWavenumbers) {
  EXPECT_THROW(build_basis(WavenumberGrid(1.0, 3.0, 3), 4), BasisConstructionError);
}

TEST(Basis, BitwiseDeterministic) {
  const auto a = galerkin_coefficients(build_basis(kData, 3));
  const auto b = galerkin_coefficients(build_basis(kData, 3));
  EXPECT_EQ(a.G_flat, b.G_flat);
  EXPECT_TRUE((a.M.array() == b.M.array()).all());
}
