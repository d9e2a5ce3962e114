#include <benchmark/benchmark.h>

#include <vector>

#include "herding/exact_enum.hpp"
#include "herding/mc_engine.hpp"
#include "herding/reference.hpp"

using namespace herding;

namespace {

ModelParams model() {
  ModelParamsInit init;
  init.kernel = DelayKernel({{0.25, 0.5}, {0.5, 0.5}});
  return ModelParams(init);
}

void BM_EnumerateReference(benchmark::State& state) {
  const auto p = model();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::enumerate_exact(p, n, 0.3, Method::kLogIndicator));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}

void BM_EnumerateTree(benchmark::State& state) {
  const auto p = model();
  const auto n = static_cast<std::size_t>(state.range(0));
  const EnumOptions opts{static_cast<int>(state.range(1)), 24};
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_exact(p, n, 0.3, Method::kLogIndicator, opts));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}

void BM_MonteCarloReference(benchmark::State& state) {
  const auto p = model();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::monte_carlo(p, 1000, 0.3, 2000, 1, Method::kLogIndicator));
  state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_MonteCarlo(benchmark::State& state) {
  const auto p = model();
  const McOptions opts{static_cast<int>(state.range(0))};
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_unfairness(p, 1000, 0.3, 2000, 1, Method::kLogIndicator, opts));
  state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_CoupledSweep(benchmark::State& state) {
  const auto p = model();
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(1.5 * i / 9.0);
  const McOptions opts{static_cast<int>(state.range(0))};
  for (auto _ : state)
    benchmark::DoNotOptimize(coupled_sweep(p, 1000, grid, 2000, 1, Method::kLogIndicator, opts));
  state.SetItemsProcessed(state.iterations() * 2000);
}

}  // namespace

BENCHMARK(BM_EnumerateReference)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateTree)->Args({12, 1})->Args({16, 1})->Args({16, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoupledSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
