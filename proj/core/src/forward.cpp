#include "cvxscat/forward.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvxscat/error.hpp"
#include "cvxscat/parallel.hpp"
#include "cvxscat/rng.hpp"

namespace cvxscat {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_wavenumber(double k, const char* where) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    std::ostringstream os;
    os << where << ": wavenumber must be positive and finite, got " << k;
    throw DomainError(os.str());
  }
}

void require_source(double x0, const char* where) {
  if (!(x0 < 0.0)) {
    std::ostringstream os;
    os << where << ": source position must be negative, got " << x0;
    throw DomainError(os.str());
  }
}

}  // namespace

cplx incident_wave(double x, double k, double x0) {
  require_wavenumber(k, "incident_wave");
  return std::exp(-kI * k * std::abs(x - x0)) / (2.0 * kI * k);
}

cplx incident_wave_dx(double x, double k, double x0) {
  const double d = x - x0;
  const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  return -kI * k * sign * incident_wave(x, k, x0);
}

ComplexWavefield solve_forward(const MediumProfile& profile, double k, double x0, const SpatialGrid& grid) {
  require_wavenumber(k, "solve_forward");
  require_source(x0, "solve_forward");
  if (grid.x_min() > 0.0 || grid.x_max() < profile.support_end()) {
    throw ContractError("solve_forward: grid must span the profile support [0, b]");
  }

  const int n = grid.node_count();
  const double h = grid.spacing();
  const std::vector<double> x = grid.nodes();

  // Trapezoidal weight times contrast; nodes where this vanishes drop out.
  std::vector<int> active;
  std::vector<double> weighted_contrast;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    const double q = w * profile.contrast(x[i]);
    if (q != 0.0) {
      active.push_back(i);
      weighted_contrast.push_back(q);
    }
  }

  ComplexWavefield field{grid, k, std::vector<cplx>(n)};
  for (int i = 0; i < n; ++i) field.values[i] = incident_wave(x[i], k, x0);
  if (active.empty()) return field;

  const int na = static_cast<int>(active.size());
  const double k2 = k * k;
  Eigen::MatrixXcd A(na, na);
  Eigen::VectorXcd rhs(na);
  for (int a = 0; a < na; ++a) {
    const double xa = x[active[a]];
    rhs(a) = field.values[active[a]];
    for (int b = 0; b < na; ++b) {
      A(a, b) = -k2 * weighted_contrast[b] * incident_wave(x[active[b]], k, xa);
    }
    A(a, a) += 1.0;
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "solve_forward: collocation matrix is singular at k = " << k << " (condition estimate "
       << (rcond > 0.0 ? 1.0 / rcond : INFINITY) << ")";
    throw NumericalFailure(os.str());
  }
  const Eigen::VectorXcd ua = lu.solve(rhs);

  for (int i = 0; i < n; ++i) {
    cplx scattered = 0.0;
    for (int b = 0; b < na; ++b) {
      scattered += weighted_contrast[b] * incident_wave(x[active[b]], k, x[i]) * ua(b);
    }
    field.values[i] += k2 * scattered;
  }
  // Collocation nodes take the solved values directly.
  for (int a = 0; a < na; ++a) field.values[active[a]] = ua(a);

  for (const cplx& v : field.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "solve_forward: non-finite field at k = " << k;
      throw NumericalFailure(os.str());
    }
  }
  return field;
}

SpatialGrid default_forward_grid(const MediumProfile& profile, double h) {
  if (!(h > 0.0)) throw DomainError("default_forward_grid: spacing must be positive");
  const int cells = std::max(1, static_cast<int>(std::lround(profile.support_end() / h)));
  return SpatialGrid(0.0, profile.support_end(), cells);
}

cplx neumann_from_dirichlet(cplx g, double k, double x0) {
  require_wavenumber(k, "neumann_from_dirichlet");
  require_source(x0, "neumann_from_dirichlet");
  const cplx scattered_amplitude = g - incident_wave(0.0, k, x0);
  return incident_wave_dx(0.0, k, x0) + kI * k * scattered_amplitude;
}

std::string to_string(NoiseMode mode) { return mode == NoiseMode::Real ? "real" : "complex"; }

NoiseMode noise_mode_from_string(const std::string& s) {
  if (s == "real") return NoiseMode::Real;
  if (s == "complex") return NoiseMode::Complex;
  throw ConfigError("unknown noise mode '" + s + "' (expected 'real' or 'complex')");
}

ScatterData ScatterData::from_dirichlet(const WavenumberGrid& kgrid, double x0, std::vector<cplx> g) {
  require_source(x0, "ScatterData");
  if (static_cast<int>(g.size()) != kgrid.size()) {
    throw ContractError("ScatterData: one Dirichlet value per wavenumber required");
  }
  ScatterData sd(kgrid, x0);
  sd.g1_.resize(g.size());
  sd.v0_.resize(g.size());
  for (int i = 0; i < kgrid.size(); ++i) {
    const double k = kgrid[i];
    if (!(std::abs(g[i]) >= 1e-14)) {
      std::ostringstream os;
      os << "ScatterData: |g(k)| = " << std::abs(g[i]) << " below 1e-14 at k = " << k;
      throw DegenerateData(os.str());
    }
    sd.g1_[i] = neumann_from_dirichlet(g[i], k, x0);
    sd.v0_[i] = sd.g1_[i] / (k * k * g[i]);
  }
  sd.g_ = std::move(g);
  return sd;
}

ScatterData simulate_data(const MediumProfile& profile, const WavenumberGrid& kgrid, double x0, double noise_level,
                          std::uint64_t seed, const SimulationOptions& opts) {
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
    throw DomainError("simulate_data: noise level must be finite and nonnegative");
  }
  const SpatialGrid grid = default_forward_grid(profile, opts.forward_h);
  const int origin = grid.find_node(0.0);
  if (origin < 0) throw ContractError("simulate_data: forward grid has no node at x = 0");

  const int K = kgrid.size();
  std::vector<cplx> exact(K);
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
    exact[i] = solve_forward(profile, kgrid[static_cast<int>(i)], x0, grid).values[origin];
  });

  // Draws happen in wavenumber order on one stream so the data are seed-stable.
  Rng rng(seed);
  std::vector<cplx> g(K);
  for (int i = 0; i < K; ++i) {
    const double scale = noise_level * std::abs(exact[i]);
    if (opts.noise_mode == NoiseMode::Real) {
      g[i] = exact[i] + scale * rng.symmetric();
    } else {
      const double re = rng.symmetric();
      const double im = rng.symmetric();
      g[i] = exact[i] + scale * cplx(re, im) / std::sqrt(2.0);
    }
  }

  ScatterData sd = ScatterData::from_dirichlet(kgrid, x0, std::move(g));
  sd.noise_level = noise_level;
  sd.noise_mode = opts.noise_mode;
  sd.seed = seed;
  sd.rng_algorithm = std::string(Rng::kRngAlgorithm);
  return sd;
}

}  // namespace cvxscat
