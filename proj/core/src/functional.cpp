#include "cvxscat/functional.hpp"

#include <cmath>
#include "json.hpp"
#include <sstream>

#include "cvxscat/error.hpp"
#include "cvxscat/rng.hpp"

namespace cvxscat {

namespace {

void check_shapes(const SpectralField& Q, const SpectralField& vhat, const GalerkinCoefficients& coeffs) {
  if (Q.components() != vhat.components() || !(Q.grid() == vhat.grid())) {
    throw ContractError("functional: Q and Vhat must share grid and component count");
  }
  if (coeffs.N != Q.N() || coeffs.M.rows() != coeffs.N || coeffs.M.cols() != coeffs.N ||
      coeffs.G_flat.size() != static_cast<std::size_t>(coeffs.N) * coeffs.N * coeffs.N) {
    throw ContractError("functional: Galerkin coefficients do not match the field's N");
  }
}

void check_boundary(const SpectralField& Q) {
  if (!Q.boundary_is_zero()) {
    throw ContractError("functional: Q must vanish at x = 0 and x = b");
  }
}

}  // namespace

void CostConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ContractError("CostConfig: lambda must be finite and >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ContractError("CostConfig: alpha must be finite and >= 0");
  if (ball_radius && !(*ball_radius > 0.0)) throw ContractError("CostConfig: ball radius must be positive");
}

std::string CostReport::to_json() const {
  nlohmann::json j;
  j["total"] = total;
  j["misfit"] = misfit;
  j["regularizer"] = regularizer;
  return j.dump();
}

Residuals residuals(const SpectralField& Q, const SpectralField& vhat, const GalerkinCoefficients& coeffs) {
  check_shapes(Q, vhat, coeffs);
  const int N = Q.N();
  const int M = Q.grid().n_cells();
  const double h = Q.grid().spacing();
  const Eigen::MatrixXd V = Q.values() + vhat.values();

  Residuals r{Eigen::MatrixXd(N, M), Eigen::MatrixXd(N, M)};
  for (int m = 0; m < M; ++m) {
    const Eigen::VectorXd dre = (V.col(m + 1).head(N) - V.col(m).head(N)) / h;
    const Eigen::VectorXd dim = (V.col(m + 1).tail(N) - V.col(m).tail(N)) / h;
    const Eigen::VectorXd d1 = coeffs.M * dre;
    const Eigen::VectorXd d2 = coeffs.M * dim;
    for (int n = 0; n < N; ++n) {
      double q1 = 0.0;
      double q2 = 0.0;
      for (int l = 0; l < N; ++l) {
        const double vr_l = V(l, m);
        const double vi_l = V(l + N, m);
        for (int j = 0; j < N; ++j) {
          const double g = coeffs.G(n, l, j);
          q1 += g * (vr_l * V(j, m) - vi_l * V(j + N, m));
          q2 += g * (vr_l * V(j + N, m) + vi_l * V(j, m));
        }
      }
      r.real_part(n, m) = d1(n) + q1;
      r.imag_part(n, m) = d2(n) + q2;
    }
  }
  return r;
}

double regularizer(const SpectralField& Q) { return h1_inner(Q, Q); }

SpectralField regularizer_gradient(const SpectralField& Q) {
  const double h = Q.grid().spacing();
  const int M = Q.grid().n_cells();
  SpectralField g(Q.grid(), Q.N());
  for (int t = 1; t < M; ++t) {
    g.values().col(t) =
        2.0 * h * Q.values().col(t) + (2.0 / h) * (2.0 * Q.values().col(t) - Q.values().col(t - 1) - Q.values().col(t + 1));
  }
  return g;
}

CostReport cost(const SpectralField& Q, const SpectralField& vhat, const GalerkinCoefficients& coeffs,
                const CostConfig& cfg) {
  cfg.validate();
  check_boundary(Q);
  CostReport rep;
  rep.residuals = residuals(Q, vhat, coeffs);
  const double h = Q.grid().spacing();
  const int M = Q.grid().n_cells();
  double misfit = 0.0;
  for (int m = 0; m < M; ++m) {
    const double weight = std::exp(-2.0 * cfg.lambda * Q.grid().node(m));
    misfit += weight * (rep.residuals.real_part.col(m).squaredNorm() + rep.residuals.imag_part.col(m).squaredNorm());
  }
  rep.misfit = h * misfit;
  rep.regularizer = regularizer(Q);
  rep.total = rep.misfit + cfg.alpha * rep.regularizer;
  return rep;
}

SpectralField gradient(const SpectralField& Q, const SpectralField& vhat, const GalerkinCoefficients& coeffs,
                       const CostConfig& cfg) {
  cfg.validate();
  check_boundary(Q);
  const Residuals r = residuals(Q, vhat, coeffs);
  const int N = Q.N();
  const int M = Q.grid().n_cells();
  const double h = Q.grid().spacing();
  const Eigen::MatrixXd V = Q.values() + vhat.values();

  // Accumulate dJ/dV over all nodes, then keep the interior (free) columns.
  Eigen::MatrixXd gV = Eigen::MatrixXd::Zero(2 * N, M + 1);
  Eigen::MatrixXd S(N, N);  // S(n, s) = sum_l (G_nls + G_nsl) Re V_l
  Eigen::MatrixXd T(N, N);  // T(n, s) = sum_l (G_nls + G_nsl) Im V_l
  for (int m = 0; m < M; ++m) {
    const double w = 2.0 * h * std::exp(-2.0 * cfg.lambda * Q.grid().node(m));
    S.setZero();
    T.setZero();
    for (int n = 0; n < N; ++n) {
      for (int s = 0; s < N; ++s) {
        for (int l = 0; l < N; ++l) {
          const double gsym = coeffs.G(n, l, s) + coeffs.G(n, s, l);
          S(n, s) += gsym * V(l, m);
          T(n, s) += gsym * V(l + N, m);
        }
      }
    }
    for (int n = 0; n < N; ++n) {
      const double a = w * r.real_part(n, m);
      const double b = w * r.imag_part(n, m);
      for (int s = 0; s < N; ++s) {
        const double mh = coeffs.M(n, s) / h;
        // Real components V_s.
        gV(s, m) += a * (-mh + S(n, s)) + b * T(n, s);
        gV(s, m + 1) += a * mh;
        // Imaginary components V_{s+N}.
        gV(s + N, m) += a * (-T(n, s)) + b * (-mh + S(n, s));
        gV(s + N, m + 1) += b * mh;
      }
    }
  }

  SpectralField g(Q.grid(), N);
  g.values().middleCols(1, M - 1) = gV.middleCols(1, M - 1);
  if (cfg.alpha != 0.0) g += cfg.alpha * regularizer_gradient(Q);
  return g;
}

CarlemanObjective::CarlemanObjective(SpectralField vhat, GalerkinCoefficients coeffs, CostConfig cfg)
    : vhat_(std::move(vhat)), coeffs_(std::move(coeffs)), cfg_(cfg) {
  cfg_.validate();
  if (coeffs_.N != vhat_.N()) throw ContractError("CarlemanObjective: coefficient order does not match Vhat");
}

SpectralField random_field_in_ball(const SpatialGrid& grid, int N, double R, double radius_fraction,
                                   std::uint64_t seed) {
  Rng rng(seed);
  SpectralField q(grid, N);
  for (int m = 1; m < grid.n_cells(); ++m) {
    for (int s = 0; s < 2 * N; ++s) q(s, m) = rng.symmetric();
  }
  const double norm = h1_norm(q);
  if (norm > 0.0) q *= radius_fraction * R / norm;
  return q;
}

LipschitzEstimate estimate_gradient_lipschitz(const CarlemanObjective& objective, double R, int pairs,
                                              std::uint64_t seed) {
  LipschitzEstimate est;
  Rng radii(seed);
  for (int p = 0; p < pairs; ++p) {
    const SpectralField a =
        random_field_in_ball(objective.grid(), objective.N(), R, radii.unit(), mix_seed(seed + 2 * p + 1));
    const SpectralField b =
        random_field_in_ball(objective.grid(), objective.N(), R, radii.unit(), mix_seed(seed + 2 * p + 2));
    const double dist = h1_norm(a - b);
    if (dist == 0.0) continue;
    const double ratio = h1_norm(objective.h1_gradient(a) - objective.h1_gradient(b)) / dist;
    est.max_ratio = std::max(est.max_ratio, ratio);
    est.mean_ratio += ratio;
    ++est.pairs;
  }
  if (est.pairs > 0) est.mean_ratio /= est.pairs;
  return est;
}

}  // namespace cvxscat
