#include <benchmark/benchmark.h>

#include <cmath>

#include "wavemap/estimator.hpp"
#include "wavemap/grid.hpp"
#include "wavemap/reconstruct.hpp"
#include "wavemap/scheme.hpp"

namespace {

using namespace wavemap;

constexpr double kTau = 1.0 / 512.0;

// A record one step into the bubble problem, so that w is non-trivial.
StepRecord bubble_record(const Grid2D& g) {
  const SolverConfig cfg;
  auto [u0, w0] = initial_data(g);
  StepResult first = step(u0, w0, kTau, cfg, g);
  StepResult second = step(first.u, first.w, kTau, cfg, g);
  return make_record(kTau, kTau, std::move(first.u), std::move(first.w), std::move(second.u), std::move(second.w), g);
}

void BM_Laplacian(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)));
  const auto [u, w] = initial_data(g);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(u, g));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(u.size()));
}

void BM_Step(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)));
  const SolverConfig cfg;
  const StepRecord rec = bubble_record(g);
  int iterations = 0;
  for (auto _ : state) {
    StepResult res = step(rec.u_np1, rec.w_np1, kTau, cfg, g);
    iterations = res.iterations;
    benchmark::DoNotOptimize(res);
  }
  state.counters["fp_iter"] = iterations;
}

void BM_LocalQuantitiesAndBounds(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)));
  const StepRecord rec = bubble_record(g);
  for (auto _ : state) {
    const LocalBounds lb = local_quantities(rec, g);
    benchmark::DoNotOptimize(residual_bounds(lb, rec.tau));
  }
}

void BM_EstimateStep(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)));
  const SolverConfig cfg;
  const StepRecord rec = bubble_record(g);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_step(rec, cfg, g));
}

void BM_EvalResiduals(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)));
  const StepRecord rec = bubble_record(g);
  const double t = rec.t_n + 0.3 * rec.tau;
  for (auto _ : state) benchmark::DoNotOptimize(eval_residuals(rec, t, g));
}

}  // namespace

BENCHMARK(BM_Laplacian)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_Step)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalQuantitiesAndBounds)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EstimateStep)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EvalResiduals)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
