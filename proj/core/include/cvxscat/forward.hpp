#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cvxscat/grid.hpp"
#include "cvxscat/profile.hpp"

namespace cvxscat {

using cplx = std::complex<double>;

/// Free-space field of a unit point source at x0: e^{-ik|x-x0|} / (2ik).
cplx incident_wave(double x, double k, double x0);

/// d/dx of incident_wave; zero at x = x0 where the derivative jumps.
cplx incident_wave_dx(double x, double k, double x0);

/// Total field u(x_i, k) sampled on a spatial grid.
struct ComplexWavefield {
  SpatialGrid grid;
  double k;
  std::vector<cplx> values;
};

/// Solves the 1-D Lippmann-Schwinger equation
///
///   u(x) = u_inc(x) + k^2 \int u_inc(xi; x) (c(xi) - 1) u(xi) dxi
///
/// by trapezoidal collocation on `grid`, which must contain [0, b]. Only the
/// nodes with nonzero contrast enter the dense LU solve; the remaining nodes are
/// filled in from the integral representation.
ComplexWavefield solve_forward(const MediumProfile& profile, double k, double x0, const SpatialGrid& grid);

/// Uniform grid on [0, b] of the profile with spacing close to h.
SpatialGrid default_forward_grid(const MediumProfile& profile, double h = 1e-3);

/// Neumann datum u_x(0, k) recovered from the Dirichlet datum via the
/// radiation condition on x < 0: g1 = u_inc_x(0) + ik (g - u_inc(0)).
cplx neumann_from_dirichlet(cplx g, double k, double x0);

enum class NoiseMode {
  /// g + level |g| r with one real r per wavenumber (the printed formula).
  Real,
  /// g + level |g| (r1 + i r2) / sqrt(2), two real draws per wavenumber.
  Complex,
};

std::string to_string(NoiseMode mode);
NoiseMode noise_mode_from_string(const std::string& s);

/// Backscatter data at x = 0: g(k), the derived g1(k) and v0 = g1 / (k^2 g).
class ScatterData {
 public:
  /// Validates |g| >= 1e-14 at every wavenumber and derives g1 and v0.
  static ScatterData from_dirichlet(const WavenumberGrid& kgrid, double x0, std::vector<cplx> g);

  const WavenumberGrid& kgrid() const { return kgrid_; }
  double x0() const { return x0_; }
  const std::vector<cplx>& g() const { return g_; }
  const std::vector<cplx>& g1() const { return g1_; }
  const std::vector<cplx>& v0() const { return v0_; }

  // Provenance of simulated data.
  double noise_level = 0.0;
  NoiseMode noise_mode = NoiseMode::Real;
  std::uint64_t seed = 0;
  std::string rng_algorithm;

 private:
  ScatterData(const WavenumberGrid& kgrid, double x0) : kgrid_(kgrid), x0_(x0) {}

  WavenumberGrid kgrid_;
  double x0_;
  std::vector<cplx> g_;
  std::vector<cplx> g1_;
  std::vector<cplx> v0_;
};

struct SimulationOptions {
  NoiseMode noise_mode = NoiseMode::Real;
  /// Forward quadrature spacing on [0, b].
  double forward_h = 1e-3;
};

/// Synthesizes (optionally noisy) backscatter data for `profile`.
ScatterData simulate_data(const MediumProfile& profile, const WavenumberGrid& kgrid, double x0, double noise_level,
                          std::uint64_t seed, const SimulationOptions& opts = {});

}  // namespace cvxscat
