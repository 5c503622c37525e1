#include "cvxscat/data.hpp"

#include <cmath>
#include <sstream>

#include "cvxscat/error.hpp"
#include "cvxscat/parallel.hpp"

namespace cvxscat {

SpectralField::SpectralField(const SpatialGrid& grid, int N)
    : grid_(grid), values_(Eigen::MatrixXd::Zero(2 * N, grid.node_count())) {
  if (N < 1) throw ContractError("SpectralField: N must be positive");
}

SpectralField::SpectralField(const SpatialGrid& grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() < 2 || values_.rows() % 2 != 0) {
    throw ContractError("SpectralField: component count must be a positive even number");
  }
  if (values_.cols() != grid_.node_count()) {
    throw ContractError("SpectralField: column count must equal the grid node count");
  }
}

bool SpectralField::boundary_is_zero() const {
  return (values_.col(0).array() == 0.0).all() && (values_.col(values_.cols() - 1).array() == 0.0).all();
}

void SpectralField::zero_boundary() {
  values_.col(0).setZero();
  values_.col(values_.cols() - 1).setZero();
}

Eigen::VectorXd SpectralField::interior() const {
  const Eigen::Index rows = values_.rows();
  const Eigen::Index inner = values_.cols() - 2;
  Eigen::VectorXd x(rows * std::max<Eigen::Index>(inner, 0));
  for (Eigen::Index m = 0; m < inner; ++m) x.segment(m * rows, rows) = values_.col(m + 1);
  return x;
}

SpectralField SpectralField::from_interior(const SpatialGrid& grid, int N, const Eigen::VectorXd& x) {
  SpectralField f(grid, N);
  const int rows = 2 * N;
  const int inner = grid.node_count() - 2;
  if (x.size() != static_cast<Eigen::Index>(rows) * inner) {
    throw ContractError("SpectralField::from_interior: vector length does not match grid and N");
  }
  for (int m = 0; m < inner; ++m) f.values_.col(m + 1) = x.segment(static_cast<Eigen::Index>(m) * rows, rows);
  return f;
}

namespace {
void require_same_shape(const SpectralField& a, const SpectralField& b) {
  if (a.components() != b.components() || !(a.grid() == b.grid())) {
    throw ContractError("SpectralField: operands have different shapes or grids");
  }
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_shape(*this, other);
  values_ += other.values_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_shape(*this, other);
  values_ -= other.values_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  values_ *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double h1_inner(const SpectralField& p, const SpectralField& q) {
  require_same_shape(p, q);
  const double h = p.grid().spacing();
  const int M = p.grid().n_cells();
  const auto& P = p.values();
  const auto& Q = q.values();
  double mass = 0.0;
  double stiff = 0.0;
  for (int m = 0; m < M; ++m) {
    mass += P.col(m).dot(Q.col(m));
    stiff += (P.col(m + 1) - P.col(m)).dot(Q.col(m + 1) - Q.col(m));
  }
  return h * mass + stiff / h;
}

double h1_norm(const SpectralField& q) { return std::sqrt(h1_inner(q, q)); }

SpectralField h1_riesz(const SpectralField& g) {
  const double h = g.grid().spacing();
  const int n = g.grid().n_cells() - 1;
  SpectralField z(g.grid(), g.N());
  if (n <= 0) return z;
  // A = h I + (1/h) tridiag(-1, 2, -1) on the interior nodes; Thomas algorithm.
  const double diag = h + 2.0 / h;
  const double off = -1.0 / h;
  std::vector<double> c(n);
  std::vector<double> d(n);
  for (int s = 0; s < g.components(); ++s) {
    c[0] = off / diag;
    d[0] = g(s, 1) / diag;
    for (int i = 1; i < n; ++i) {
      const double denom = diag - off * c[i - 1];
      c[i] = off / denom;
      d[i] = (g(s, i + 1) - off * d[i - 1]) / denom;
    }
    z(s, n) = d[n - 1];
    for (int i = n - 2; i >= 0; --i) z(s, i + 1) = d[i] - c[i] * z(s, i + 2);
  }
  return z;
}

BoundaryVectors boundary_vectors(const ScatterData& sd, const SpectralBasis& basis) {
  if (basis.mode() != QuadratureMode::Discrete || !(basis.quadrature_grid() == sd.kgrid())) {
    throw ContractError("boundary_vectors: basis must use the discrete inner product on the data wavenumbers");
  }
  const int N = basis.size();
  const auto& F = basis.values();
  const auto& w = basis.weights();
  const auto& kg = sd.kgrid();
  BoundaryVectors bv{Eigen::VectorXd::Zero(2 * N), Eigen::VectorXd::Zero(2 * N)};
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < kg.size(); ++i) {
      const double wf = w(i) * F(n, i);
      bv.V0(n) += wf * sd.v0()[i].real();
      bv.V0(n + N) += wf * sd.v0()[i].imag();
      bv.Vb(n + N) -= wf / kg[i];
    }
  }
  return bv;
}

SpectralField build_vhat(const BoundaryVectors& bv, const SpatialGrid& grid) {
  if (bv.V0.size() != bv.Vb.size() || bv.V0.size() % 2 != 0 || bv.V0.size() == 0) {
    throw ContractError("build_vhat: boundary vectors must have equal, even, nonzero length");
  }
  const int M = grid.n_cells();
  Eigen::MatrixXd values(bv.V0.size(), M + 1);
  for (int m = 0; m <= M; ++m) {
    const double t = static_cast<double>(m) / M;
    values.col(m) = (1.0 - t) * bv.V0 + t * bv.Vb;
  }
  return SpectralField(grid, std::move(values));
}

Eigen::MatrixXcd sample_log_derivative(const MediumProfile& profile, const WavenumberGrid& kgrid,
                                       const SpatialGrid& grid, double x0, double forward_h) {
  const SpatialGrid fwd = default_forward_grid(profile, forward_h);
  if (grid.x_min() < fwd.x_min() || grid.x_max() > fwd.x_max() + 1e-12) {
    throw ContractError("sample_log_derivative: grid must lie inside the forward domain [0, b_support]");
  }
  const int K = kgrid.size();
  const int nf = fwd.node_count();
  const double hf = fwd.spacing();
  Eigen::MatrixXcd out(K, grid.node_count());

  parallel_for(static_cast<std::size_t>(K), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double k = kgrid[i];
    const ComplexWavefield u = solve_forward(profile, k, x0, fwd);
    std::vector<cplx> v(nf);
    for (int j = 0; j < nf; ++j) {
      cplx ux;
      if (j == 0) {
        ux = (u.values[1] - u.values[0]) / hf;
      } else if (j == nf - 1) {
        ux = (u.values[j] - u.values[j - 1]) / hf;
      } else {
        ux = (u.values[j + 1] - u.values[j - 1]) / (2.0 * hf);
      }
      const double xj = fwd.node(j);
      if (xj >= grid.x_min() - 1e-12 && xj <= grid.x_max() + 1e-12 && std::abs(u.values[j]) < 1e-12) {
        std::ostringstream os;
        os << "sample_log_derivative: |u| below 1e-12 at x = " << xj << ", k = " << k;
        throw DegenerateData(os.str());
      }
      v[j] = ux / (k * k * u.values[j]);
    }
    for (int m = 0; m < grid.node_count(); ++m) {
      const double r = (grid.node(m) - fwd.x_min()) / hf;
      const int j = std::min(nf - 2, std::max(0, static_cast<int>(std::floor(r))));
      const double t = std::clamp(r - j, 0.0, 1.0);
      out(i, m) = (1.0 - t) * v[j] + t * v[j + 1];
    }
  });
  return out;
}

SpectralField project_onto_basis(const Eigen::MatrixXcd& samples, const SpectralBasis& basis,
                                 const SpatialGrid& grid) {
  if (basis.mode() != QuadratureMode::Discrete) {
    throw ContractError("project_onto_basis: basis must use the discrete inner product");
  }
  if (samples.rows() != basis.quadrature_grid().size() || samples.cols() != grid.node_count()) {
    throw ContractError("project_onto_basis: sample matrix shape does not match basis and grid");
  }
  const int N = basis.size();
  const Eigen::MatrixXd FW = basis.values() * basis.weights().asDiagonal();
  Eigen::MatrixXd values(2 * N, grid.node_count());
  values.topRows(N) = FW * samples.real();
  values.bottomRows(N) = FW * samples.imag();
  return SpectralField(grid, std::move(values));
}

double synthesis_residual(const SpectralField& V, const Eigen::MatrixXcd& samples, const SpectralBasis& basis) {
  const int N = basis.size();
  const auto& F = basis.values();
  const Eigen::MatrixXd re = F.transpose() * V.values().topRows(N);
  const Eigen::MatrixXd im = F.transpose() * V.values().bottomRows(N);
  const double num = (re - samples.real()).squaredNorm() + (im - samples.imag()).squaredNorm();
  return std::sqrt(num / samples.squaredNorm());
}

SpectralField exact_spectral_field(const MediumProfile& profile, const WavenumberGrid& kgrid,
                                   const SpectralBasis& basis, const SpatialGrid& grid, double x0,
                                   double forward_h) {
  return project_onto_basis(sample_log_derivative(profile, kgrid, grid, x0, forward_h), basis, grid);
}

}  // namespace cvxscat
