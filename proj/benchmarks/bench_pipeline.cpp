#include <benchmark/benchmark.h>

#include "cvxscat/experiment.hpp"

using namespace cvxscat;

namespace {

ExperimentConfig bench_config() { return example_config("example1"); }

InversionProblem bench_problem() {
  const auto cfg = bench_config();
  const auto sd = simulate_data(make_profile(cfg.profile), make_kgrid(cfg), cfg.x0, cfg.noise_level, cfg.seed);
  return setup_inversion(sd, cfg);
}

}  // namespace

static void BM_ForwardSolve(benchmark::State& state) {
  const auto profile = MediumProfile::step(0.1, 0.2, 3.0);
  const auto grid = default_forward_grid(profile, 0.5 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_forward(profile, 2.0, -0.1, grid));
}
BENCHMARK(BM_ForwardSolve)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_SimulateData(benchmark::State& state) {
  const auto cfg = bench_config();
  const auto profile = make_profile(cfg.profile);
  const auto kg = make_kgrid(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_data(profile, kg, cfg.x0, cfg.noise_level, cfg.seed));
}
BENCHMARK(BM_SimulateData)->Unit(benchmark::kMillisecond);

static void BM_CostAndGradient(benchmark::State& state) {
  const auto problem = bench_problem();
  const auto q = random_field_in_ball(problem.grid(), problem.objective.N(), 1.0, 0.5, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(problem.objective(q));
    benchmark::DoNotOptimize(problem.objective.gradient(q));
  }
}
BENCHMARK(BM_CostAndGradient);

static void BM_Inversion(benchmark::State& state) {
  const auto cfg = bench_config();
  const auto problem = bench_problem();
  for (auto _ : state) benchmark::DoNotOptimize(invert(problem, cfg, SpectralField(problem.grid(), cfg.N)));
}
BENCHMARK(BM_Inversion)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
