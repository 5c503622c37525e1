#include "cvxscat/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cvxscat/csv.hpp"
#include "cvxscat/error.hpp"
#include "cvxscat/verify.hpp"
#include "json.hpp"

namespace cvxscat {

using nlohmann::json;

namespace {

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

const std::set<std::string>& nullable_keys() {
  static const std::set<std::string> keys{"optimizer.grad_tol", "optimizer.gamma", "optimizer.ball_radius"};
  return keys;
}

json to_json_tree(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["profile"] = {{"kind", c.profile.kind},       {"left", c.profile.left},   {"right", c.profile.right},
                  {"amplitude", c.profile.amplitude}, {"center", c.profile.center}, {"width", c.profile.width},
                  {"support_end", c.profile.support_end}, {"file", c.profile.file}};
  j["kgrid"] = {{"k_min", c.k_min}, {"k_max", c.k_max}, {"count", c.K}};
  j["source"] = {{"x0", c.x0}};
  j["forward"] = {{"h", c.forward_h}};
  j["reconstruction"] = {{"b", c.b}, {"n_cells", c.n_cells}};
  j["basis"] = {{"N", c.N}};
  j["functional"] = {{"lambda", c.lambda}, {"alpha", c.alpha}};
  j["noise"] = {{"level", c.noise_level}, {"mode", to_string(c.noise_mode)}, {"seed", c.seed}};
  j["optimizer"] = {{"method", to_string(c.optimizer.method)},
                    {"max_iter", c.optimizer.max_iter},
                    {"grad_tol", optional_to_json(c.optimizer.grad_tol)},
                    {"gamma", optional_to_json(c.optimizer.gamma)},
                    {"memory", c.optimizer.memory},
                    {"use_ball", c.optimizer.use_ball},
                    {"ball_radius", optional_to_json(c.optimizer.ball_radius)},
                    {"h1_preconditioner", c.optimizer.h1_preconditioner}};
  j["initial_guess"] = c.initial_guess;
  j["certificates"] = c.certificates;
  j["output_dir"] = c.output_dir;
  return j;
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

// Overlays `patch` onto `tree`, rejecting keys absent from the schema.
void merge_checked(json& tree, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw ConfigError("config: expected an object at '" + (prefix.empty() ? "<root>" : prefix) + "'");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!tree.contains(it.key())) throw ConfigError("config: unknown key '" + key + "'");
    json& slot = tree[it.key()];
    if (slot.is_object()) {
      merge_checked(slot, it.value(), key);
      continue;
    }
    const bool nullable = nullable_keys().count(key) > 0;
    if (it.value().is_null()) {
      if (!nullable) throw ConfigError("config: '" + key + "' may not be null");
    } else if (nullable) {
      if (!it.value().is_number()) throw ConfigError("config: '" + key + "' must be a number or null");
    } else if (!same_kind(slot, it.value())) {
      throw ConfigError("config: '" + key + "' has the wrong type (expected " + std::string(slot.type_name()) + ")");
    }
    if (slot.is_number_integer() && it.value().is_number_float()) {
      throw ConfigError("config: '" + key + "' must be an integer");
    }
    slot = it.value();
  }
}

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ExperimentConfig from_json_tree(const json& j) {
  ExperimentConfig c;
  c.name = j["name"].get<std::string>();
  const json& p = j["profile"];
  c.profile.kind = p["kind"].get<std::string>();
  c.profile.left = p["left"].get<double>();
  c.profile.right = p["right"].get<double>();
  c.profile.amplitude = p["amplitude"].get<double>();
  c.profile.center = p["center"].get<double>();
  c.profile.width = p["width"].get<double>();
  c.profile.support_end = p["support_end"].get<double>();
  c.profile.file = p["file"].get<std::string>();
  c.k_min = j["kgrid"]["k_min"].get<double>();
  c.k_max = j["kgrid"]["k_max"].get<double>();
  c.K = j["kgrid"]["count"].get<int>();
  c.x0 = j["source"]["x0"].get<double>();
  c.forward_h = j["forward"]["h"].get<double>();
  c.b = j["reconstruction"]["b"].get<double>();
  c.n_cells = j["reconstruction"]["n_cells"].get<int>();
  c.N = j["basis"]["N"].get<int>();
  c.lambda = j["functional"]["lambda"].get<double>();
  c.alpha = j["functional"]["alpha"].get<double>();
  c.noise_level = j["noise"]["level"].get<double>();
  c.noise_mode = noise_mode_from_string(j["noise"]["mode"].get<std::string>());
  c.seed = j["noise"]["seed"].get<std::uint64_t>();
  const json& o = j["optimizer"];
  c.optimizer.method = method_from_string(o["method"].get<std::string>());
  c.optimizer.max_iter = o["max_iter"].get<int>();
  c.optimizer.grad_tol = optional_from_json(o["grad_tol"]);
  c.optimizer.gamma = optional_from_json(o["gamma"]);
  c.optimizer.memory = o["memory"].get<int>();
  c.optimizer.use_ball = o["use_ball"].get<bool>();
  c.optimizer.ball_radius = optional_from_json(o["ball_radius"]);
  c.optimizer.h1_preconditioner = o["h1_preconditioner"].get<bool>();
  c.initial_guess = j["initial_guess"].get<std::string>();
  c.certificates = j["certificates"].get<bool>();
  c.output_dir = j["output_dir"].get<std::string>();
  c.validate();
  return c;
}

double true_center(const ProfileSpec& spec, std::span<const double> c_true, const SpatialGrid& grid) {
  if (spec.kind == "step") return 0.5 * (spec.left + spec.right);
  if (spec.kind == "gaussian") return spec.center;
  return argmax_location(c_true, grid);
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::set<std::string> kinds{"step", "gaussian", "homogeneous", "tabulated"};
  if (!kinds.count(profile.kind)) throw ConfigError("config: unknown profile kind '" + profile.kind + "'");
  if (profile.kind == "tabulated" && profile.file.empty()) throw ConfigError("config: tabulated profile needs a file");
  if (!(k_min > 0.0 && k_max > k_min)) throw ConfigError("config: need 0 < k_min < k_max");
  if (K < 2) throw ConfigError("config: kgrid.count must be at least 2");
  if (!(x0 < 0.0)) throw ConfigError("config: source.x0 must be negative");
  if (!(forward_h > 0.0)) throw ConfigError("config: forward.h must be positive");
  if (!(b > 0.0)) throw ConfigError("config: reconstruction.b must be positive");
  if (b > profile.support_end + 1e-12) throw ConfigError("config: reconstruction.b exceeds profile.support_end");
  if (n_cells < 2) throw ConfigError("config: reconstruction.n_cells must be at least 2");
  if (N < 1 || N > K) throw ConfigError("config: basis.N must be in [1, kgrid.count]");
  if (!(lambda >= 0.0)) throw ConfigError("config: functional.lambda must be >= 0");
  if (!(alpha >= 0.0)) throw ConfigError("config: functional.alpha must be >= 0");
  if (!(noise_level >= 0.0)) throw ConfigError("config: noise.level must be >= 0");
  if (optimizer.max_iter < 0) throw ConfigError("config: optimizer.max_iter must be >= 0");
  if (optimizer.memory < 1) throw ConfigError("config: optimizer.memory must be >= 1");
  if (optimizer.grad_tol && !(*optimizer.grad_tol > 0.0)) throw ConfigError("config: optimizer.grad_tol must be > 0");
  if (optimizer.gamma && !(*optimizer.gamma > 0.0)) throw ConfigError("config: optimizer.gamma must be > 0");
  if (optimizer.ball_radius && !(*optimizer.ball_radius > 0.0)) {
    throw ConfigError("config: optimizer.ball_radius must be > 0");
  }
  if (initial_guess != "zero" && initial_guess != "exact") {
    throw ConfigError("config: initial_guess must be 'zero' or 'exact'");
  }
}

ExperimentConfig example_config(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "example1" || name == "1") {
    c.name = "example1";
    c.profile = {"step", 0.1, 0.2, 3.0, 0.1, 0.04, 0.5, ""};
  } else if (name == "example2" || name == "2") {
    c.name = "example2";
    c.profile = {"step", 0.15, 0.25, 6.0, 0.1, 0.04, 0.5, ""};
  } else if (name == "example3" || name == "3") {
    c.name = "example3";
    c.profile = {"gaussian", 0.1, 0.2, 3.0, 0.1, 0.04, 0.5, ""};
  } else if (name == "homogeneous") {
    c.profile.kind = "homogeneous";
    c.profile.amplitude = 0.0;
  } else {
    throw ConfigError("unknown example '" + name + "' (expected example1, example2, example3 or homogeneous)");
  }
  return c;
}

ExperimentConfig config_from_json(const std::string& text, const ExperimentConfig& base) {
  json patch;
  try {
    patch = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  json tree = to_json_tree(base);
  merge_checked(tree, patch, "");
  return from_json_tree(tree);
}

std::string config_to_json(const ExperimentConfig& cfg) { return to_json_tree(cfg).dump(2); }

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json patch = json::object();
  json* node = &patch;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  (*node)[parts.back()] = value;
  json tree = to_json_tree(cfg);
  merge_checked(tree, patch, "");
  cfg = from_json_tree(tree);
}

MediumProfile make_profile(const ProfileSpec& spec) {
  if (spec.kind == "step") return MediumProfile::step(spec.left, spec.right, spec.amplitude, spec.support_end);
  if (spec.kind == "gaussian") return MediumProfile::gaussian(spec.center, spec.width, spec.amplitude, spec.support_end);
  if (spec.kind == "homogeneous") return MediumProfile::homogeneous(spec.support_end);
  if (spec.kind == "tabulated") {
    const CsvTable t = read_csv(spec.file);
    std::vector<double> xs;
    std::vector<double> cs;
    const std::size_t ix = t.column("x");
    const std::size_t ic = t.column("c");
    for (const auto& row : t.rows) {
      xs.push_back(row[ix]);
      cs.push_back(row[ic]);
    }
    return MediumProfile::tabulated(std::move(xs), std::move(cs));
  }
  throw ConfigError("unknown profile kind '" + spec.kind + "'");
}

WavenumberGrid make_kgrid(const ExperimentConfig& cfg) { return WavenumberGrid(cfg.k_min, cfg.k_max, cfg.K); }

SpatialGrid make_reconstruction_grid(const ExperimentConfig& cfg) { return SpatialGrid(0.0, cfg.b, cfg.n_cells); }

InversionProblem setup_inversion(const ScatterData& data, const ExperimentConfig& cfg) {
  SpectralBasis basis = build_basis(data.kgrid(), cfg.N, QuadratureMode::Discrete);
  GalerkinCoefficients coeffs = galerkin_coefficients(basis);
  BoundaryVectors bv = boundary_vectors(data, basis);
  SpectralField vhat = build_vhat(bv, make_reconstruction_grid(cfg));
  CostConfig cost_cfg{cfg.lambda, cfg.alpha, std::nullopt};
  CarlemanObjective objective(std::move(vhat), coeffs, cost_cfg);
  return InversionProblem{std::move(basis), std::move(coeffs), std::move(bv), std::move(objective)};
}

Oracle compute_oracle(const MediumProfile& profile, const ExperimentConfig& cfg, const SpectralBasis& basis) {
  const WavenumberGrid kgrid = make_kgrid(cfg);
  const SpatialGrid grid = make_reconstruction_grid(cfg);
  const Eigen::MatrixXcd samples = sample_log_derivative(profile, kgrid, grid, cfg.x0, cfg.forward_h);
  SpectralField V_star = project_onto_basis(samples, basis, grid);
  SimulationOptions sim;
  sim.forward_h = cfg.forward_h;
  const ScatterData clean = simulate_data(profile, kgrid, cfg.x0, 0.0, cfg.seed, sim);
  SpectralField vhat_star = build_vhat(boundary_vectors(clean, basis), grid);
  SpectralField Q_star = V_star - vhat_star;
  Q_star.zero_boundary();
  const double residual = synthesis_residual(V_star, samples, basis);
  std::vector<double> c_star = coefficient_from_field(V_star, basis, kgrid.k_min()).c;
  return Oracle{std::move(V_star), std::move(vhat_star), std::move(Q_star), std::move(c_star), residual};
}

InversionResult invert(const InversionProblem& problem, const ExperimentConfig& cfg, const SpectralField& Q0,
                       std::optional<double> ball_radius, const IterationCallback& on_iteration) {
  const CarlemanObjective& obj = problem.objective;
  SolveOptions opts;
  opts.method = cfg.optimizer.method;
  opts.max_iter = cfg.optimizer.max_iter;
  opts.grad_tol = cfg.optimizer.grad_tol;
  opts.memory = cfg.optimizer.memory;
  opts.h1_preconditioner = cfg.optimizer.h1_preconditioner;
  opts.ball_radius = ball_radius;

  InversionResult res{SolveTrace{}, problem.vhat(), CoefficientEstimate{}, {}, 0.0, 0.0, ball_radius};
  if (opts.method == Method::GradientProjection) {
    if (cfg.optimizer.gamma) {
      opts.gamma = *cfg.optimizer.gamma;
    } else {
      const double R = ball_radius.value_or(std::max(1.0, 2.0 * h1_norm(Q0)));
      const LipschitzEstimate lip = estimate_gradient_lipschitz(obj, R, 50, cfg.seed);
      opts.gamma = 1.0 / (2.0 * lip.max_ratio);
    }
    res.gamma = opts.gamma;
  }

  SpectralField start = Q0;
  if (ball_radius) start = project_ball(start, *ball_radius);
  res.trace = minimize([&](const SpectralField& q) { return obj(q); },
                       [&](const SpectralField& q) { return obj.gradient(q); }, start, opts, on_iteration);
  res.V = res.trace.solution() + problem.vhat();
  res.raw = coefficient_from_field(res.V, problem.basis, problem.basis.data_grid().k_min());
  res.c = clip_to_physical(res.raw.c);
  res.k_stability = k_stability(res.V, problem.basis);
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const IterationCallback& on_iteration) {
  cfg.validate();
  const MediumProfile profile = make_profile(cfg.profile);
  const WavenumberGrid kgrid = make_kgrid(cfg);
  SimulationOptions sim;
  sim.noise_mode = cfg.noise_mode;
  sim.forward_h = cfg.forward_h;
  ScatterData data = simulate_data(profile, kgrid, cfg.x0, cfg.noise_level, cfg.seed, sim);
  InversionProblem problem = setup_inversion(data, cfg);
  Oracle oracle = compute_oracle(profile, cfg, problem.basis);

  ExperimentConfig resolved = cfg;
  std::optional<double> radius;
  if (cfg.optimizer.use_ball) {
    radius = cfg.optimizer.ball_radius.value_or(2.0 * h1_norm(oracle.Q_star));
    resolved.optimizer.ball_radius = radius;
  }
  const SpectralField Q0 = cfg.initial_guess == "exact" ? oracle.Q_star : SpectralField(problem.grid(), cfg.N);
  InversionResult inv = invert(problem, cfg, Q0, radius, on_iteration);
  if (inv.gamma > 0.0) resolved.optimizer.gamma = inv.gamma;

  const SpatialGrid& grid = problem.grid();
  std::vector<double> c_true = sample_profile(profile, grid);
  ReconstructionMetrics met;
  std::vector<double> contrast(inv.c.size());
  for (std::size_t i = 0; i < contrast.size(); ++i) contrast[i] = inv.c[i] - 1.0;
  met.argmax = argmax_location(contrast, grid);
  met.true_center = true_center(cfg.profile, c_true, grid);
  met.peak_contrast = *std::max_element(contrast.begin(), contrast.end());
  met.true_peak_contrast = *std::max_element(c_true.begin(), c_true.end()) - 1.0;
  met.relative_l2 = relative_l2_error(inv.c, c_true, grid);
  met.imag_ratio = inv.raw.imag_ratio;

  return ExperimentResult{std::move(resolved), std::move(data),   std::move(problem), std::move(oracle),
                          std::move(inv),      std::move(c_true), met};
}

void write_field_csv(const std::filesystem::path& path, const SpectralField& field) {
  CsvTable t;
  t.header.push_back("x");
  for (int s = 0; s < field.components(); ++s) t.header.push_back("V" + std::to_string(s + 1));
  for (int m = 0; m < field.nodes(); ++m) {
    std::vector<double> row{field.grid().node(m)};
    for (int s = 0; s < field.components(); ++s) row.push_back(field(s, m));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

SpectralField read_field_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty() || t.header[0] != "x" || t.header.size() < 3 || (t.header.size() - 1) % 2 != 0) {
    throw ContractError("field csv: expected columns x, V1..V2N");
  }
  if (t.rows.size() < 3) throw ContractError("field csv: need at least three nodes");
  const int nodes = static_cast<int>(t.rows.size());
  const SpatialGrid grid(t.rows.front()[0], t.rows.back()[0], nodes - 1);
  for (int m = 0; m < nodes; ++m) {
    if (std::abs(grid.node(m) - t.rows[m][0]) > 1e-9 * grid.spacing()) {
      throw ContractError("field csv: x column is not a uniform grid");
    }
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(t.header.size() - 1), nodes);
  for (int m = 0; m < nodes; ++m) {
    for (std::size_t s = 1; s < t.header.size(); ++s) values(static_cast<Eigen::Index>(s - 1), m) = t.rows[m][s];
  }
  return SpectralField(grid, std::move(values));
}

void write_data_csv(const std::filesystem::path& path, const ScatterData& data) {
  CsvTable t;
  t.header = {"k", "re_g", "im_g", "re_g1", "im_g1", "re_v0", "im_v0"};
  for (int i = 0; i < data.kgrid().size(); ++i) {
    t.rows.push_back({data.kgrid()[i], data.g()[i].real(), data.g()[i].imag(), data.g1()[i].real(),
                      data.g1()[i].imag(), data.v0()[i].real(), data.v0()[i].imag()});
  }
  write_csv(path, t);
  json meta{{"x0", data.x0()},
            {"noise_level", data.noise_level},
            {"noise_mode", to_string(data.noise_mode)},
            {"seed", data.seed},
            {"rng_algorithm", data.rng_algorithm},
            {"k_min", data.kgrid().k_min()},
            {"k_max", data.kgrid().k_max()},
            {"count", data.kgrid().size()}};
  std::filesystem::path meta_path = path;
  meta_path.replace_filename(path.stem().string() + "_meta.json");
  std::ofstream(meta_path) << meta.dump(2) << '\n';
}

ScatterData read_data_csv(const std::filesystem::path& path, double x0) {
  const CsvTable t = read_csv(path);
  const std::size_t ik = t.column("k");
  const std::size_t ire = t.column("re_g");
  const std::size_t iim = t.column("im_g");
  if (t.rows.size() < 2) throw ContractError("data csv: need at least two wavenumbers");
  const WavenumberGrid kgrid(t.rows.front()[ik], t.rows.back()[ik], static_cast<int>(t.rows.size()));
  std::vector<cplx> g;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (std::abs(t.rows[i][ik] - kgrid[static_cast<int>(i)]) > 1e-9 * kgrid.spacing()) {
      throw ContractError("data csv: wavenumbers are not uniformly spaced");
    }
    g.emplace_back(t.rows[i][ire], t.rows[i][iim]);
  }
  return ScatterData::from_dirichlet(kgrid, x0, std::move(g));
}

namespace {

json iteration_json(const IterationRecord& rec, const CostReport& rep) {
  json j{{"iter", rec.iter},
         {"cost", rec.cost},
         {"misfit", rep.misfit},
         {"regularizer", rep.regularizer},
         {"grad_norm", rec.grad_norm},
         {"step_accepted", rec.step_accepted},
         {"step", rec.step}};
  if (rec.distance_to_reference) j["distance_to_reference"] = *rec.distance_to_reference;
  return j;
}

void write_certificates(const ExperimentResult& res, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const CarlemanObjective& obj = res.problem.objective;
  const double R = res.config.optimizer.ball_radius.value_or(2.0 * h1_norm(res.oracle.Q_star));
  const std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 5.0};
  const std::vector<double> carleman_lambdas{1.0, 5.0, 10.0};
  std::ofstream(dir / "carleman.json") << certify_carleman(res.problem.grid(), carleman_lambdas, 100, res.config.seed).to_json() << '\n';
  std::ofstream(dir / "convexity.json") << certify_convexity(obj, R, lambdas, 200, res.config.seed).to_json() << '\n';
  std::ofstream(dir / "lipschitz.json") << certify_lipschitz(obj, R, 200, res.config.seed).to_json() << '\n';
  std::ofstream(dir / "gradient.json") << certify_gradient(obj, R, 50, res.config.seed).to_json() << '\n';
}

}  // namespace

ExperimentResult run_and_write(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream trace_out(out_dir / "trace.jsonl");
  // The misfit/regularizer split needs the objective, which only exists once the run returns.
  std::vector<std::pair<IterationRecord, SpectralField>> iterates;
  ExperimentResult res = run_experiment(cfg, [&](const IterationRecord& rec, const SpectralField& q) {
    iterates.emplace_back(rec, q);
  });
  for (const auto& [rec, q] : iterates) {
    trace_out << iteration_json(rec, res.problem.objective.report(q)).dump() << '\n';
  }

  const SpatialGrid& grid = res.problem.grid();
  CsvTable ct;
  ct.header = {"x", "c_reconstructed", "c_true"};
  for (int m = 0; m < grid.node_count(); ++m) ct.rows.push_back({grid.node(m), res.inversion.c[m], res.c_true[m]});
  write_csv(out_dir / "c_reconstructed.csv", ct);
  write_field_csv(out_dir / "V_fields.csv", res.inversion.V);
  write_field_csv(out_dir / "vhat.csv", res.problem.vhat());
  write_field_csv(out_dir / "q.csv", res.inversion.trace.solution());
  write_field_csv(out_dir / "v_exact.csv", res.oracle.V_star);
  write_data_csv(out_dir / "data.csv", res.data);

  std::ofstream(out_dir / "config_resolved.json") << config_to_json(res.config) << '\n';

  const auto& m = res.metrics;
  json summary{{"name", res.config.name},
               {"termination", to_string(res.inversion.trace.termination)},
               {"iterations", res.inversion.trace.records.back().iter},
               {"final_cost", res.inversion.trace.records.back().cost},
               {"final_grad_norm", res.inversion.trace.records.back().grad_norm},
               {"grad_tol", res.inversion.trace.grad_tol},
               {"argmax", m.argmax},
               {"true_center", m.true_center},
               {"peak_contrast", m.peak_contrast},
               {"true_peak_contrast", m.true_peak_contrast},
               {"relative_l2", m.relative_l2},
               {"imag_ratio", m.imag_ratio},
               {"k_stability", res.inversion.k_stability},
               {"truncation_residual", res.oracle.truncation_residual},
               {"M_condition", res.problem.coeffs.M_condition},
               {"rng_algorithm", res.data.rng_algorithm}};
  std::ofstream(out_dir / "summary.json") << summary.dump(2) << '\n';

  if (cfg.certificates) write_certificates(res, out_dir / "certificates");
  return res;
}

int run_example(const std::string& name, const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  ExperimentConfig c = cfg;
  if (c.name != name) {
    const ExperimentConfig ex = example_config(name);
    c.name = ex.name;
    c.profile = ex.profile;
  }
  run_and_write(c, out_dir);
  return 0;
}

std::string InvarianceReport::to_json() const {
  json j{{"relative_distance", relative_distance},
         {"solution_distance", solution_distance},
         {"termination_zero", to_string(termination_zero)},
         {"termination_exact", to_string(termination_exact)},
         {"threshold", 0.05},
         {"threshold_note", "5% relative L2 is a chosen quantification of 'practically coincide'"},
         {"c_from_zero", c_from_zero},
         {"c_from_exact", c_from_exact}};
  return j.dump(2);
}

InvarianceReport run_invariance_study(const ExperimentConfig& cfg) {
  ExperimentConfig zero = cfg;
  zero.initial_guess = "zero";
  const ExperimentResult a = run_experiment(zero);
  const SpectralField Q0 = a.oracle.Q_star;
  const InversionResult b = invert(a.problem, cfg, Q0, a.inversion.ball_radius);

  InvarianceReport rep;
  rep.c_from_zero = a.inversion.c;
  rep.c_from_exact = b.c;
  rep.termination_zero = a.inversion.trace.termination;
  rep.termination_exact = b.trace.termination;
  const SpatialGrid& grid = a.problem.grid();
  rep.relative_distance = relative_l2_error(b.c, a.inversion.c, grid);
  const double qn = h1_norm(a.inversion.trace.solution());
  const double dq = h1_norm(a.inversion.trace.solution() - b.trace.solution());
  rep.solution_distance = qn > 0.0 ? dq / qn : dq;
  return rep;
}

}  // namespace cvxscat
