#include "cvxscat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxscat/error.hpp"
#include "cvxscat/parallel.hpp"
#include "cvxscat/rng.hpp"
#include "json.hpp"

namespace cvxscat {

using nlohmann::json;

namespace {

// An error counts as having reached the noiseless floor once it is within 25% of it.
constexpr double kFloorBand = 1.25;

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double euclidean_dot(const SpectralField& a, const SpectralField& b) {
  return (a.values().array() * b.values().array()).sum();
}

// Unit Euclidean direction over the interior nodes.
SpectralField random_direction(const SpatialGrid& grid, int N, Rng& rng) {
  SpectralField e(grid, N);
  for (int m = 1; m < grid.n_cells(); ++m) {
    for (int s = 0; s < 2 * N; ++s) e(s, m) = rng.symmetric();
  }
  e *= 1.0 / e.values().norm();
  return e;
}

}  // namespace

CarlemanSides carleman_sides(const SpatialGrid& grid, std::span<const double> h, double lambda) {
  const double dx = grid.spacing();
  CarlemanSides sides;
  for (int m = 0; m < grid.n_cells(); ++m) {
    const double wl = std::exp(-2.0 * lambda * grid.node(m));
    const double wr = std::exp(-2.0 * lambda * grid.node(m + 1));
    const double slope = (h[m + 1] - h[m]) / dx;
    sides.lhs += 0.5 * dx * slope * slope * (wl + wr);
    sides.rhs += 0.5 * dx * (h[m] * h[m] * wl + h[m + 1] * h[m + 1] * wr);
  }
  return sides;
}

std::string CarlemanCertificate::to_json() const {
  json j{{"trials", trials}, {"seed", seed}, {"tolerance", "margin >= -1e-8 * max(lhs, lambda^2 rhs)"}, {"passed", passed}};
  j["per_lambda"] = json::array();
  for (const auto& p : per_lambda) {
    j["per_lambda"].push_back({{"lambda", p.lambda},
                               {"min_margin", p.min_margin},
                               {"min_scaled_margin", p.min_scaled_margin},
                               {"failures", p.failures},
                               {"passed", p.passed}});
  }
  return j.dump(2);
}

CarlemanCertificate certify_carleman(const SpatialGrid& grid, std::span<const double> lambdas, int trials,
                                     std::uint64_t seed) {
  if (trials < 1) throw ContractError("certify_carleman: trials must be >= 1");
  CarlemanCertificate cert;
  cert.trials = trials;
  cert.seed = seed;
  cert.passed = true;
  std::vector<std::vector<double>> samples(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    auto& h = samples[static_cast<std::size_t>(t)];
    h.assign(static_cast<std::size_t>(grid.node_count()), 0.0);
    for (std::size_t m = 1; m < h.size(); ++m) h[m] = 2.0 * rng.unit() - 1.0;
  }
  for (double lambda : lambdas) {
    CarlemanCertificate::PerLambda p;
    p.lambda = lambda;
    p.min_margin = std::numeric_limits<double>::infinity();
    p.min_scaled_margin = std::numeric_limits<double>::infinity();
    for (const auto& h : samples) {
      const CarlemanSides s = carleman_sides(grid, h, lambda);
      const double weighted = lambda * lambda * s.rhs;
      const double margin = s.lhs - weighted;
      const double scale = std::max(s.lhs, weighted);
      p.min_margin = std::min(p.min_margin, margin);
      if (scale > 0.0) p.min_scaled_margin = std::min(p.min_scaled_margin, margin / scale);
      if (margin < -1e-8 * scale) ++p.failures;
    }
    p.passed = p.failures == 0;
    cert.passed = cert.passed && p.passed;
    cert.per_lambda.push_back(p);
  }
  return cert;
}

std::string ConvexityCertificate::to_json() const {
  json j{{"R", R},
         {"alpha", alpha},
         {"pairs", pairs},
         {"seed", seed},
         {"empirical_lambda0", optional_json(empirical_lambda0)},
         {"self_consistent", self_consistent},
         {"passed", passed}};
  j["per_lambda"] = json::array();
  for (const auto& p : per_lambda) {
    j["per_lambda"].push_back({{"lambda", p.lambda},
                               {"min_gap", p.min_gap},
                               {"min_ratio", p.min_ratio},
                               {"min_ratio_alpha0", p.min_ratio_alpha0},
                               {"negative_gaps", p.negative_gaps},
                               {"skipped", p.skipped},
                               {"passed", p.passed},
                               {"passed_alpha0", p.passed_alpha0}});
  }
  return j.dump(2);
}

ConvexityCertificate certify_convexity(const CarlemanObjective& objective, double R, std::span<const double> lambdas,
                                       int pairs, std::uint64_t seed) {
  if (pairs < 1) throw ContractError("certify_convexity: pairs must be >= 1");
  ConvexityCertificate cert;
  cert.R = R;
  cert.alpha = objective.config().alpha;
  cert.pairs = pairs;
  cert.seed = seed;

  const SpatialGrid& grid = objective.grid();
  const int N = objective.N();
  std::vector<SpectralField> base;
  std::vector<SpectralField> other;
  Rng radii(seed);
  for (int p = 0; p < pairs; ++p) {
    base.push_back(random_field_in_ball(grid, N, R, radii.unit(), mix_seed(seed + 2 * p + 1)));
    other.push_back(random_field_in_ball(grid, N, R, radii.unit(), mix_seed(seed + 2 * p + 2)));
  }

  auto measure = [&](const CarlemanObjective& obj, double& min_gap, double& min_ratio, int& negative, int& skipped) {
    std::vector<double> gaps(static_cast<std::size_t>(pairs));
    std::vector<double> norms(static_cast<std::size_t>(pairs));
    parallel_for(static_cast<std::size_t>(pairs), [&](std::size_t i) {
      const SpectralField diff = other[i] - base[i];
      norms[i] = h1_norm(diff);
      gaps[i] = obj(other[i]) - obj(base[i]) - euclidean_dot(obj.gradient(base[i]), diff);
    });
    min_gap = std::numeric_limits<double>::infinity();
    min_ratio = std::numeric_limits<double>::infinity();
    negative = 0;
    skipped = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      if (norms[i] < 1e-14) {
        ++skipped;
        continue;
      }
      min_gap = std::min(min_gap, gaps[i]);
      min_ratio = std::min(min_ratio, gaps[i] / (norms[i] * norms[i]));
      if (gaps[i] < 0.0) ++negative;
    }
  };

  cert.passed = true;
  for (double lambda : lambdas) {
    ConvexityCertificate::PerLambda p;
    p.lambda = lambda;
    CostConfig cfg = objective.config();
    cfg.lambda = lambda;
    measure(objective.with_config(cfg), p.min_gap, p.min_ratio, p.negative_gaps, p.skipped);
    cfg.alpha = 0.0;
    double gap0 = 0.0;
    int neg0 = 0;
    int skip0 = 0;
    measure(objective.with_config(cfg), gap0, p.min_ratio_alpha0, neg0, skip0);
    p.passed = p.negative_gaps == 0 && p.min_ratio > 0.0 && (cert.alpha == 0.0 || p.min_ratio > cert.alpha * (1.0 - 1e-9));
    p.passed_alpha0 = neg0 == 0 && p.min_ratio_alpha0 > 0.0;
    cert.passed = cert.passed && p.passed;
    cert.per_lambda.push_back(p);
  }
  std::vector<ConvexityCertificate::PerLambda> sorted = cert.per_lambda;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  for (const auto& p : sorted) {
    if (p.passed_alpha0) {
      cert.empirical_lambda0 = p.lambda;
      break;
    }
  }
  cert.self_consistent = cert.empirical_lambda0.has_value();
  for (const auto& p : sorted) {
    if (cert.empirical_lambda0 && p.lambda >= *cert.empirical_lambda0 && !p.passed_alpha0) cert.self_consistent = false;
  }
  return cert;
}

std::string LipschitzCertificate::to_json() const {
  return json{{"max_ratio", max_ratio},
              {"resampled_max_ratio", resampled_max_ratio},
              {"relative_change", relative_change},
              {"pairs", pairs},
              {"norm", "discrete H1, gradient as H1 Riesz representer"},
              {"passed", passed}}
      .dump(2);
}

LipschitzCertificate certify_lipschitz(const CarlemanObjective& objective, double R, int pairs, std::uint64_t seed) {
  LipschitzCertificate cert;
  cert.pairs = pairs;
  const LipschitzEstimate a = estimate_gradient_lipschitz(objective, R, pairs, seed);
  const LipschitzEstimate b = estimate_gradient_lipschitz(objective, R, pairs, mix_seed(seed ^ 0x5eedULL));
  cert.max_ratio = a.max_ratio;
  cert.resampled_max_ratio = b.max_ratio;
  cert.relative_change = a.max_ratio > 0.0 ? std::abs(a.max_ratio - b.max_ratio) / a.max_ratio : 0.0;
  cert.passed = std::isfinite(a.max_ratio) && std::isfinite(b.max_ratio) && cert.relative_change <= 0.2;
  return cert;
}

std::string GradientCheckCertificate::to_json() const {
  json j{{"directions", directions},
         {"eps", eps},
         {"max_relative_error", max_relative_error},
         {"threshold", 1e-5},
         {"passed", passed}};
  j["ladder"] = json::array();
  for (const auto& r : ladder) j["ladder"].push_back({{"eps", r.eps}, {"max_relative_error", r.max_relative_error}});
  return j.dump(2);
}

GradientCheckCertificate certify_gradient(const CarlemanObjective& objective, double R, int directions,
                                          std::uint64_t seed) {
  GradientCheckCertificate cert;
  cert.directions = directions;
  const SpatialGrid& grid = objective.grid();
  const int N = objective.N();
  const SpectralField Q = random_field_in_ball(grid, N, R, 0.5, mix_seed(seed));
  const SpectralField g = objective.gradient(Q);
  std::vector<SpectralField> dirs;
  for (int d = 0; d < directions; ++d) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(d));
    dirs.push_back(random_direction(grid, N, rng));
  }
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (double eps : ladder) {
    std::vector<double> errors(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t i) {
      const double fd = (objective(Q + eps * dirs[i]) - objective(Q - eps * dirs[i])) / (2.0 * eps);
      const double an = euclidean_dot(g, dirs[i]);
      errors[i] = std::abs(fd - an) / std::abs(an);
    });
    const double worst = *std::max_element(errors.begin(), errors.end());
    cert.ladder.push_back({eps, worst});
    if (eps == cert.eps) cert.max_relative_error = worst;
  }
  cert.passed = cert.max_relative_error < 1e-5;
  return cert;
}

std::string ContractionCertificate::to_json() const {
  return json{{"gamma", gamma},
              {"lipschitz", lipschitz},
              {"iterations", iterations},
              {"tail", tail},
              {"tail_ratios", tail_ratios},
              {"q_max", q_max},
              {"initial_distance", initial_distance},
              {"final_distance", final_distance},
              {"passed", passed}}
      .dump(2);
}

ContractionCertificate certify_contraction(const CarlemanObjective& objective, const SpectralField& Q0,
                                           std::optional<double> ball_radius, double gamma, int iterations, int tail) {
  if (gamma <= 0.0) throw ContractError("certify_contraction: gamma must be > 0");
  if (tail < 1 || tail > iterations) throw ContractError("certify_contraction: need 1 <= tail <= iterations");
  ContractionCertificate cert;
  cert.gamma = gamma;
  cert.iterations = iterations;
  cert.tail = tail;

  const CostFn f = [&](const SpectralField& q) { return objective(q); };
  const GradFn df = [&](const SpectralField& q) { return objective.gradient(q); };

  SolveOptions tight;
  tight.method = Method::QuasiNewton;
  tight.max_iter = 20000;
  tight.ball_radius = ball_radius;
  tight.grad_tol = 1e-13 * (1.0 + std::abs(objective(Q0)));
  const SolveTrace reference = minimize(f, df, Q0, tight);

  SolveOptions gp;
  gp.method = Method::GradientProjection;
  gp.max_iter = iterations;
  gp.gamma = gamma;
  gp.ball_radius = ball_radius;
  gp.grad_tol = 1e-300;
  gp.reference = reference.solution();
  const SolveTrace trace = minimize(f, df, Q0, gp);

  const std::vector<double> ratios = trace.contraction_ratios();
  const std::size_t take = std::min(ratios.size(), static_cast<std::size_t>(tail));
  cert.tail_ratios.assign(ratios.end() - static_cast<std::ptrdiff_t>(take), ratios.end());
  cert.q_max = cert.tail_ratios.empty() ? 0.0 : *std::max_element(cert.tail_ratios.begin(), cert.tail_ratios.end());
  cert.initial_distance = trace.records.front().distance_to_reference.value_or(0.0);
  cert.final_distance = trace.records.back().distance_to_reference.value_or(0.0);
  cert.lipschitz = 1.0 / (2.0 * gamma);
  cert.passed = static_cast<int>(take) == tail && cert.q_max < 1.0;
  return cert;
}

std::string ErrorEstimateCertificate::to_json() const {
  json j{{"xi", xi},
         {"seed", seed},
         {"q_floor", q_floor},
         {"c_floor", c_floor},
         {"q_slope", q_slope},
         {"c_slope", c_slope},
         {"monotone", monotone},
         {"slope_threshold", 0.8},
         {"floor_band", kFloorBand},
         {"passed", passed}};
  j["levels"] = json::array();
  for (const auto& l : levels) {
    j["levels"].push_back({{"delta", l.delta},
                           {"alpha", l.alpha},
                           {"q_error", l.q_error},
                           {"c_error", l.c_error},
                           {"q_noise_error", l.q_noise_error},
                           {"c_noise_error", l.c_noise_error},
                           {"q_at_floor", l.q_at_floor},
                           {"c_at_floor", l.c_at_floor}});
  }
  return j.dump(2);
}

ErrorEstimateCertificate certify_error_estimate(const ExperimentConfig& base, std::span<const double> noise_levels,
                                                std::uint64_t seed, double xi) {
  if (noise_levels.size() < 3) throw ContractError("certify_error_estimate: need at least three noise levels");
  for (std::size_t i = 0; i < noise_levels.size(); ++i) {
    if (!(noise_levels[i] > 0.0) || (i > 0 && noise_levels[i] >= noise_levels[i - 1])) {
      throw ContractError("certify_error_estimate: noise levels must be positive and decreasing");
    }
  }
  ErrorEstimateCertificate cert;
  cert.xi = xi;
  cert.seed = seed;

  auto run = [&](double delta, double alpha) {
    ExperimentConfig cfg = base;
    cfg.seed = seed;
    cfg.noise_level = delta;
    cfg.alpha = alpha;
    cfg.initial_guess = "zero";
    return run_experiment(cfg);
  };

  const ExperimentResult clean = run(0.0, 0.0);
  const SpatialGrid& grid = clean.problem.grid();
  auto c_distance = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return l2_norm(d, grid);
  };
  const SpectralField& q_clean = clean.inversion.trace.solution();
  cert.q_floor = h1_norm(clean.oracle.Q_star - q_clean);
  cert.c_floor = c_distance(clean.oracle.c_star, clean.inversion.raw.c);

  std::vector<double> deltas;
  std::vector<double> qn;
  std::vector<double> cn;
  for (double delta : noise_levels) {
    const ExperimentResult r = run(delta, xi * delta * delta);
    ErrorEstimateCertificate::Level lvl;
    lvl.delta = delta;
    lvl.alpha = xi * delta * delta;
    const SpectralField& q = r.inversion.trace.solution();
    lvl.q_error = h1_norm(r.oracle.Q_star - q);
    lvl.c_error = c_distance(r.oracle.c_star, r.inversion.raw.c);
    lvl.q_noise_error = h1_norm(q - q_clean);
    lvl.c_noise_error = c_distance(r.inversion.raw.c, clean.inversion.raw.c);
    lvl.q_at_floor = lvl.q_error <= kFloorBand * cert.q_floor;
    lvl.c_at_floor = lvl.c_error <= kFloorBand * cert.c_floor;
    cert.levels.push_back(lvl);
    deltas.push_back(delta);
    qn.push_back(lvl.q_noise_error);
    cn.push_back(lvl.c_noise_error);
  }

  auto monotone = [&](auto member, double floor) {
    for (std::size_t i = 1; i < cert.levels.size(); ++i) {
      const double prev = cert.levels[i - 1].*member;
      const double cur = cert.levels[i].*member;
      if (cur > prev && cur > kFloorBand * floor) return false;
    }
    return true;
  };
  cert.monotone = monotone(&ErrorEstimateCertificate::Level::q_error, cert.q_floor) &&
                  monotone(&ErrorEstimateCertificate::Level::c_error, cert.c_floor);
  cert.q_slope = loglog_slope(deltas, qn);
  cert.c_slope = loglog_slope(deltas, cn);
  cert.passed = cert.monotone && cert.q_slope >= 0.8 && cert.c_slope >= 0.8;
  return cert;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("loglog_slope: need two or more matching samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cvxscat
