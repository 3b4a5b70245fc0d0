#include "dmbmpc/oracle.hpp"
#include "dmbmpc/simulator.hpp"

#include <benchmark/benchmark.h>

using namespace dmbmpc;

namespace {

Vector x0() {
  Vector x(2);
  x << 1.0, -1.0;
  return x;
}

void BM_Condense(benchmark::State& state) {
  const auto cfg = paper_example_config();
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(condense(cfg.plant, cfg.cost, cfg.box, N, x0()));
  }
}
BENCHMARK(BM_Condense)->Arg(3)->Arg(6)->Arg(12)->Arg(24);

void BM_SolveBoxQp(benchmark::State& state) {
  const auto cfg = paper_example_config();
  const auto prob = condense(cfg.plant, cfg.cost, cfg.box, static_cast<int>(state.range(0)), x0());
  int iterations = 0;
  for (auto _ : state) {
    const auto sol = solve_box_qp(prob);
    iterations = sol.iterations;
    benchmark::DoNotOptimize(sol.value);
  }
  state.counters["qp_iters"] = iterations;
}
BENCHMARK(BM_SolveBoxQp)->Arg(3)->Arg(6)->Arg(12)->Arg(24);

void BM_DpValue(benchmark::State& state) {
  Matrix a = Matrix::Constant(1, 1, 0.9);
  const auto f = LinearPlant(a, Matrix::Identity(1, 1), Matrix::Identity(1, 1)).as_state_map();
  const StageCostFn cost = [](const Vector& x, const Vector& u) { return x.squaredNorm() + u.squaredNorm(); };
  const auto grid = InputGrid::scalar({-1.0, -0.5, 0.0, 0.5, 1.0});
  const Vector start = Vector::Constant(1, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dp_value(f, cost, grid, static_cast<int>(state.range(0)), start).value);
  }
}
BENCHMARK(BM_DpValue)->DenseRange(2, 8, 2);

void BM_RunReceding(benchmark::State& state) {
  auto cfg = paper_example_config();
  cfg.T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_receding(cfg, cfg.horizon.period()).total_cost);
  }
}
BENCHMARK(BM_RunReceding)->Arg(100)->Arg(400);

void BM_RunDmb(benchmark::State& state) {
  auto cfg = paper_example_config();
  cfg.T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_dmb(cfg).total_cost);
  }
}
BENCHMARK(BM_RunDmb)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
