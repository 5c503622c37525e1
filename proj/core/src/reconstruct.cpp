#include "cvxscat/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cvxscat/error.hpp"

namespace cvxscat {

CoefficientEstimate coefficient_from_field(const SpectralField& V, const SpectralBasis& basis, double k_eval) {
  const int N = basis.size();
  if (V.N() != N) throw ContractError("coefficient_from_field: field and basis have different N");
  const auto& kg = basis.data_grid();
  if (k_eval < kg.k_min() - 1e-12 || k_eval > kg.k_max() + 1e-12) {
    throw DomainError("coefficient_from_field: k_eval outside the data band");
  }
  const SpatialGrid& grid = V.grid();
  const int M = grid.n_cells();
  const double h = grid.spacing();

  std::vector<double> f(N);
  for (int n = 0; n < N; ++n) f[n] = basis.value(n, k_eval);

  auto v_at = [&](int n, int m) { return std::complex<double>(V(n, m), V(n + N, m)); };

  CoefficientEstimate est;
  est.x = grid.nodes();
  est.c.resize(M + 1);
  est.c_imag.resize(M + 1);
  for (int m = 0; m <= M; ++m) {
    const int lo = m < M ? m : M - 1;
    std::complex<double> dv = 0.0;
    std::complex<double> v = 0.0;
    for (int n = 0; n < N; ++n) {
      dv += (v_at(n, lo + 1) - v_at(n, lo)) / h * f[n];
      v += v_at(n, m) * f[n];
    }
    const std::complex<double> c = -dv - k_eval * k_eval * v * v;
    est.c[m] = c.real();
    est.c_imag[m] = c.imag();
  }
  const double re = l2_norm(est.c, grid);
  est.imag_ratio = re > 0.0 ? l2_norm(est.c_imag, grid) / re : INFINITY;
  return est;
}

std::vector<double> clip_to_physical(std::span<const double> c) {
  std::vector<double> out(c.begin(), c.end());
  for (double& v : out) v = std::max(v, 1.0);
  return out;
}

std::vector<double> sample_profile(const MediumProfile& profile, const SpatialGrid& grid) {
  std::vector<double> out(grid.node_count());
  for (int m = 0; m < grid.node_count(); ++m) out[m] = profile(grid.node(m));
  return out;
}

double l2_norm(std::span<const double> f, const SpatialGrid& grid) {
  if (static_cast<int>(f.size()) != grid.node_count()) throw ContractError("l2_norm: size does not match grid");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
    s += w * f[i] * f[i];
  }
  return std::sqrt(s * grid.spacing());
}

double relative_l2_error(std::span<const double> a, std::span<const double> b, const SpatialGrid& grid) {
  if (a.size() != b.size()) throw ContractError("relative_l2_error: size mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return l2_norm(d, grid) / l2_norm(b, grid);
}

double argmax_location(std::span<const double> c, const SpatialGrid& grid) {
  if (static_cast<int>(c.size()) != grid.node_count()) throw ContractError("argmax_location: size mismatch");
  const auto it = std::max_element(c.begin(), c.end());
  return grid.node(static_cast<int>(it - c.begin()));
}

double k_stability(const SpectralField& V, const SpectralBasis& basis) {
  const auto& kg = basis.data_grid();
  const CoefficientEstimate a = coefficient_from_field(V, basis, kg[0]);
  const CoefficientEstimate b = coefficient_from_field(V, basis, kg[1]);
  return relative_l2_error(b.c, a.c, V.grid());
}

}  // namespace cvxscat
