#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cvxscat/csv.hpp"
#include "cvxscat/error.hpp"
#include "cvxscat/verify.hpp"
#include "json.hpp"

namespace cvxscat::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text << '\n';
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m, const std::string& prefix) {
  CsvTable t;
  for (Eigen::Index j = 0; j < m.cols(); ++j) t.header.push_back(prefix + std::to_string(j + 1));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_coefficient_csv(const std::filesystem::path& path, const SpatialGrid& grid, const std::vector<double>& c,
                           const std::vector<double>* c_true) {
  CsvTable t;
  t.header = {"x", "c_reconstructed"};
  if (c_true) t.header.push_back("c_true");
  for (int m = 0; m < grid.node_count(); ++m) {
    std::vector<double> row{grid.node(m), c[static_cast<std::size_t>(m)]};
    if (c_true) row.push_back((*c_true)[static_cast<std::size_t>(m)]);
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

json trace_line(const IterationRecord& rec) {
  return {{"iter", rec.iter},
          {"cost", rec.cost},
          {"grad_norm", rec.grad_norm},
          {"step_accepted", rec.step_accepted},
          {"step", rec.step}};
}

}  // namespace

ExperimentConfig resolve_config(const CommonArgs& args, const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  if (!args.config_file.empty()) cfg = config_from_json(read_file(args.config_file), cfg);
  for (const auto& o : args.overrides) apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

std::filesystem::path output_dir(const CommonArgs& args, const ExperimentConfig& cfg) {
  std::filesystem::path dir = std::filesystem::path(args.out_dir.empty() ? cfg.output_dir : args.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_simulate(const CommonArgs& args, double field_k, bool dump_basis) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto dir = output_dir(args, cfg);
  const MediumProfile profile = make_profile(cfg.profile);
  const WavenumberGrid kgrid = make_kgrid(cfg);
  SimulationOptions sim;
  sim.noise_mode = cfg.noise_mode;
  sim.forward_h = cfg.forward_h;
  const ScatterData data = simulate_data(profile, kgrid, cfg.x0, cfg.noise_level, cfg.seed, sim);
  write_data_csv(dir / "data.csv", data);
  write_text(dir / "config_resolved.json", config_to_json(cfg));

  if (field_k > 0.0) {
    const ComplexWavefield u = solve_forward(profile, field_k, cfg.x0, default_forward_grid(profile, cfg.forward_h));
    CsvTable t;
    t.header = {"x", "re_u", "im_u"};
    for (int m = 0; m < u.grid.node_count(); ++m) {
      t.rows.push_back({u.grid.node(m), u.values[static_cast<std::size_t>(m)].real(),
                        u.values[static_cast<std::size_t>(m)].imag()});
    }
    write_csv(dir / "field.csv", t);
  }
  if (dump_basis) {
    const SpectralBasis basis = build_basis(kgrid, cfg.N);
    const GalerkinCoefficients gc = galerkin_coefficients(basis);
    write_matrix_csv(dir / "basis_values.csv", basis.values().transpose(), "f");
    write_matrix_csv(dir / "M.csv", gc.M, "col");
    CsvTable g;
    g.header = {"m", "n", "j", "G"};
    for (int m = 0; m < gc.N; ++m) {
      for (int n = 0; n < gc.N; ++n) {
        for (int j = 0; j < gc.N; ++j) g.rows.push_back({double(m + 1), double(n + 1), double(j + 1), gc.G(m, n, j)});
      }
    }
    write_csv(dir / "G.csv", g);
  }
  if (!args.quiet) std::cout << "wrote " << (dir / "data.csv").string() << '\n';
  return 0;
}

int cmd_invert(const CommonArgs& args, const std::string& data_file) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto dir = output_dir(args, cfg);
  std::ofstream trace_out(dir / "trace.jsonl");
  const auto log = [&](const IterationRecord& rec, const SpectralField&) { trace_out << trace_line(rec).dump() << '\n'; };

  if (data_file.empty()) {
    run_and_write(cfg, dir);
    if (!args.quiet) std::cout << read_file((dir / "summary.json").string()) << '\n';
    return 0;
  }

  const ScatterData data = read_data_csv(data_file, cfg.x0);
  const InversionProblem problem = setup_inversion(data, cfg);
  if (cfg.initial_guess != "zero") throw ConfigError("initial_guess 'exact' needs simulated data");
  if (cfg.optimizer.use_ball && !cfg.optimizer.ball_radius) {
    throw ConfigError("optimizer.use_ball with measured data needs an explicit optimizer.ball_radius");
  }
  const SpectralField Q0(problem.grid(), cfg.N);
  const InversionResult inv = invert(problem, cfg, Q0, cfg.optimizer.ball_radius, log);
  write_field_csv(dir / "V_fields.csv", inv.V);
  write_field_csv(dir / "vhat.csv", problem.vhat());
  write_field_csv(dir / "q.csv", inv.trace.solution());
  write_coefficient_csv(dir / "c_reconstructed.csv", problem.grid(), inv.c, nullptr);
  ExperimentConfig resolved = cfg;
  if (inv.gamma > 0.0) resolved.optimizer.gamma = inv.gamma;
  write_text(dir / "config_resolved.json", config_to_json(resolved));
  const json summary{{"termination", to_string(inv.trace.termination)},
                     {"iterations", inv.trace.records.back().iter},
                     {"final_cost", inv.trace.records.back().cost},
                     {"final_grad_norm", inv.trace.records.back().grad_norm},
                     {"imag_ratio", inv.raw.imag_ratio},
                     {"k_stability", inv.k_stability}};
  write_text(dir / "summary.json", summary.dump(2));
  if (!args.quiet) std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_reconstruct(const CommonArgs& args, const std::string& fields_file) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto dir = output_dir(args, cfg);
  const SpectralField V = read_field_csv(fields_file);
  if (V.N() != cfg.N) throw ConfigError("field file has N = " + std::to_string(V.N()) + " but basis.N = " + std::to_string(cfg.N));
  const SpectralBasis basis = build_basis(make_kgrid(cfg), cfg.N);
  const CoefficientEstimate est = coefficient_from_field(V, basis, cfg.k_min);
  const std::vector<double> c = clip_to_physical(est.c);
  write_coefficient_csv(dir / "c_reconstructed.csv", V.grid(), c, nullptr);
  if (!args.quiet) {
    std::cout << "wrote " << (dir / "c_reconstructed.csv").string() << " (imag ratio " << est.imag_ratio << ")\n";
  }
  return 0;
}

int cmd_certify(const CommonArgs& args, const std::string& example, const std::vector<std::string>& which) {
  ExperimentConfig cfg = resolve_config(args, example_config(example));
  const auto dir = output_dir(args, cfg) / "certificates";
  std::filesystem::create_directories(dir);
  const auto wants = [&](const std::string& name) { return std::find(which.begin(), which.end(), name) != which.end(); };

  cfg.optimizer.use_ball = true;
  const ExperimentResult res = run_experiment(cfg);
  const CarlemanObjective& obj = res.problem.objective;
  const double R = *res.config.optimizer.ball_radius;

  bool all_passed = true;
  json summary = json::object();
  const auto record = [&](const std::string& name, bool passed, const std::string& body) {
    write_text(dir / (name + ".json"), body);
    summary[name] = passed;
    all_passed = all_passed && passed;
  };

  if (wants("carleman")) {
    const std::vector<double> lambdas{1.0, 5.0, 10.0};
    const auto c = certify_carleman(res.problem.grid(), lambdas, 100, cfg.seed);
    record("carleman", c.passed, c.to_json());
  }
  if (wants("convexity")) {
    const std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    const auto c = certify_convexity(obj, R, lambdas, 200, cfg.seed);
    record("convexity", c.passed, c.to_json());
  }
  if (wants("lipschitz")) {
    const auto c = certify_lipschitz(obj, R, 200, cfg.seed);
    record("lipschitz", c.passed, c.to_json());
  }
  if (wants("gradient")) {
    const auto c = certify_gradient(obj, R, 50, cfg.seed);
    record("gradient", c.passed, c.to_json());
  }
  if (wants("contraction")) {
    const double gamma = cfg.optimizer.gamma.value_or(1.0 / (2.0 * estimate_gradient_lipschitz(obj, R, 50, cfg.seed).max_ratio));
    const SpectralField Q0(res.problem.grid(), cfg.N);
    const auto c = certify_contraction(obj, Q0, R, gamma, 100, 50);
    record("contraction", c.passed, c.to_json());
  }
  if (wants("error")) {
    const std::vector<double> levels{0.1, 0.05, 0.025};
    const auto c = certify_error_estimate(cfg, levels, cfg.seed);
    record("error_estimate", c.passed, c.to_json());
  }
  write_text(dir / "summary.json", summary.dump(2));
  if (!args.quiet) std::cout << summary.dump(2) << '\n';
  return all_passed ? 0 : 1;
}

int cmd_example(const CommonArgs& args, const std::string& name) {
  const ExperimentConfig cfg = resolve_config(args, example_config(name));
  const auto dir = output_dir(args, cfg);
  run_and_write(cfg, dir);
  if (!args.quiet) std::cout << read_file((dir / "summary.json").string()) << '\n';
  return 0;
}

int cmd_invariance(const CommonArgs& args, const std::string& example) {
  const ExperimentConfig cfg = resolve_config(args, example_config(example));
  const auto dir = output_dir(args, cfg);
  const InvarianceReport rep = run_invariance_study(cfg);
  write_text(dir / "invariance.json", rep.to_json());
  if (!args.quiet) {
    std::cout << "relative L2 distance between reconstructions: " << rep.relative_distance
              << (rep.relative_distance < 0.05 ? " (< 5%)" : " (>= 5%)") << '\n';
  }
  return 0;
}

}  // namespace cvxscat::cli
