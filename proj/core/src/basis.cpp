#include "cvxscat/basis.hpp"

#include <cmath>
#include <sstream>

#include "cvxscat/error.hpp"

namespace cvxscat {

namespace {

// e^t * sum_j c_j t^j, and its t-derivative e^t * sum_j c_j (t^j + j t^{j-1}).
double generator_combination(const Eigen::MatrixXd& coeffs, int n, double t) {
  double p = 0.0;
  for (int j = coeffs.cols() - 1; j >= 0; --j) p = p * t + coeffs(n, j);
  return std::exp(t) * p;
}

double generator_combination_dt(const Eigen::MatrixXd& coeffs, int n, double t) {
  double p = 0.0;
  double dp = 0.0;
  for (int j = coeffs.cols() - 1; j >= 0; --j) {
    dp = dp * t + p;
    p = p * t + coeffs(n, j);
  }
  return std::exp(t) * (p + dp);
}

}  // namespace

std::string to_string(QuadratureMode mode) { return mode == QuadratureMode::Discrete ? "discrete" : "dense"; }

double SpectralBasis::value(int n, double k) const {
  const double L = data_grid_.k_max() - data_grid_.k_min();
  return generator_combination(coeffs_, n, (k - data_grid_.k_min()) / L) / std::sqrt(L);
}

double SpectralBasis::derivative(int n, double k) const {
  const double L = data_grid_.k_max() - data_grid_.k_min();
  return generator_combination_dt(coeffs_, n, (k - data_grid_.k_min()) / L) / (L * std::sqrt(L));
}

double SpectralBasis::orthonormality_residual() const {
  const Eigen::MatrixXd gram = values_ * weights_.asDiagonal() * values_.transpose();
  return (gram - Eigen::MatrixXd::Identity(size(), size())).cwiseAbs().maxCoeff();
}

SpectralBasis build_basis(const WavenumberGrid& kgrid, int N, QuadratureMode mode, int dense_nodes) {
  if (N < 1) throw BasisConstructionError("build_basis: N must be at least 1");
  const WavenumberGrid quad =
      mode == QuadratureMode::Discrete ? kgrid : WavenumberGrid(kgrid.k_min(), kgrid.k_max(), dense_nodes);
  const int K = quad.size();
  if (N > K) {
    std::ostringstream os;
    os << "build_basis: N = " << N << " exceeds the " << K << " quadrature nodes";
    throw BasisConstructionError(os.str());
  }

  SpectralBasis basis(kgrid, quad, mode);
  const double L = kgrid.k_max() - kgrid.k_min();

  // Inner product in t: trapezoid weights in k divided by L.
  const std::vector<double> wk = quad.trapezoid_weights();
  Eigen::VectorXd wt(K);
  Eigen::VectorXd t(K);
  for (int i = 0; i < K; ++i) {
    wt(i) = wk[i] / L;
    t(i) = (quad[i] - kgrid.k_min()) / L;
  }

  Eigen::MatrixXd psi(N, K);
  for (int i = 0; i < K; ++i) {
    double p = std::exp(t(i));
    for (int j = 0; j < N; ++j) {
      psi(j, i) = p;
      p *= t(i);
    }
  }

  const Eigen::MatrixXd gram = psi * wt.asDiagonal() * psi.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  basis.gram_condition_ = lo > 0.0 ? hi / lo : INFINITY;
  if (!(basis.gram_condition_ <= 1e12)) {
    std::ostringstream os;
    os << "build_basis: generator Gram matrix is rank deficient (condition " << basis.gram_condition_ << ")";
    throw BasisConstructionError(os.str());
  }

  // Modified Gram-Schmidt with one re-orthogonalization pass, tracking the
  // combination coefficients alongside the sampled values.
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd phi(N, K);
  for (int n = 0; n < N; ++n) {
    Eigen::VectorXd c = Eigen::VectorXd::Unit(N, n);
    Eigen::VectorXd v = psi.row(n).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (int m = 0; m < n; ++m) {
        const double r = phi.row(m).dot(wt.cwiseProduct(v));
        v -= r * phi.row(m).transpose();
        c -= r * coeffs.row(m).transpose();
      }
    }
    const double norm = std::sqrt(v.dot(wt.cwiseProduct(v)));
    coeffs.row(n) = c.transpose() / norm;
    phi.row(n) = v.transpose() / norm;
  }
  basis.coeffs_ = coeffs;

  // Values are re-evaluated from the coefficients so that value() and the
  // stored matrices agree exactly.
  basis.values_.resize(N, K);
  basis.derivs_.resize(N, K);
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < K; ++i) {
      basis.values_(n, i) = basis.value(n, quad[i]);
      basis.derivs_(n, i) = basis.derivative(n, quad[i]);
    }
  }
  basis.weights_ = Eigen::Map<const Eigen::VectorXd>(wk.data(), K);
  return basis;
}

GalerkinCoefficients GalerkinCoefficients::zeros(int N) {
  GalerkinCoefficients gc;
  gc.N = N;
  gc.M = Eigen::MatrixXd::Zero(N, N);
  gc.G_flat.assign(static_cast<std::size_t>(N) * N * N, 0.0);
  gc.M_condition = INFINITY;
  return gc;
}

Eigen::MatrixXd assemble_M(const SpectralBasis& basis) {
  const auto& F = basis.values();
  const auto& dF = basis.derivatives();
  // M(m, n) = sum_i w_i f_n'(k_i) f_m(k_i)
  return F * basis.weights().asDiagonal() * dF.transpose();
}

std::vector<double> assemble_G(const SpectralBasis& basis) {
  const int N = basis.size();
  const auto& F = basis.values();
  const auto& dF = basis.derivatives();
  const auto& w = basis.weights();
  const auto& kq = basis.quadrature_grid();
  std::vector<double> G(static_cast<std::size_t>(N) * N * N, 0.0);
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int i = 0; i < kq.size(); ++i) {
          const double k = kq[i];
          s += w(i) * (2.0 * k * F(n, i) * F(j, i) + 2.0 * k * k * F(n, i) * dF(j, i)) * F(m, i);
        }
        G[(static_cast<std::size_t>(m) * N + n) * N + j] = s;
      }
    }
  }
  return G;
}

GalerkinCoefficients galerkin_coefficients(const SpectralBasis& basis) {
  GalerkinCoefficients gc;
  gc.N = basis.size();
  gc.M = assemble_M(basis);
  gc.G_flat = assemble_G(basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gc.M);
  const auto& s = svd.singularValues();
  gc.M_condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : INFINITY;
  return gc;
}

}  // namespace cvxscat
