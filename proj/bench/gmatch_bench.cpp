// Serial reference kernels against their OpenMP and incremental counterparts.
// Arg(0) selects the serial backend; Arg(k > 0) runs OpenMP with k workers.

#include <benchmark/benchmark.h>

#include "gmatch/anneal.hpp"
#include "gmatch/experiments.hpp"
#include "gmatch/graph.hpp"

using namespace gmatch;

namespace {

Execution execution_for(std::int64_t workers) {
  if (workers == 0) return {Backend::serial, 1, {}};
  return {Backend::openmp, static_cast<unsigned>(workers), {}};
}

void census_kernel(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto exec = execution_for(state.range(1));
  constexpr std::uint64_t kSamples = 8 * kSampleBlock;
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_tail_samples(n, kSamples, 3, 1, exec));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kSamples));
}
BENCHMARK(census_kernel)
    ->ArgNames({"n", "workers"})
    ->ArgsProduct({{100, 1000}, {0, 1, 2, 4}})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

void swap_delta_incremental(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pair = generate_pair(n, 0.5, Relabel::random, 1);
  Rng rng(2);
  const auto p = random_permutation(n, rng);
  SwapEvaluator evaluator(pair, p.zero_based());
  for (auto _ : state) {
    const auto i = rng.below(n);
    const auto j = (i + 1 + rng.below(n - 1)) % n;
    benchmark::DoNotOptimize(evaluator.delta(i, j));
  }
}
BENCHMARK(swap_delta_incremental)->Arg(100)->Arg(1000);

void swap_delta_recompute(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pair = generate_pair(n, 0.5, Relabel::random, 1);
  Rng rng(2);
  const auto p = random_permutation(n, rng);
  for (auto _ : state) {
    const auto i = 1 + rng.below(n);
    const auto j = 1 + (i + rng.below(n - 1)) % n;
    benchmark::DoNotOptimize(structural_energy(pair, swap_positions(p, i, j)));
  }
}
BENCHMARK(swap_delta_recompute)->Arg(100)->Arg(1000);

void anneal_run(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pair = generate_pair(n, 0.5, Relabel::random, 3);
  auto config = AnnealConfig::defaults_for(n);
  config.seed = 4;
  config.evaluation = state.range(1) == 0 ? Evaluation::incremental : Evaluation::full_recompute;
  for (auto _ : state) benchmark::DoNotOptimize(anneal(pair, config).best_objective);
}
BENCHMARK(anneal_run)
    ->ArgNames({"n", "full_recompute"})
    ->Args({50, 0})
    ->Args({50, 1})
    ->Args({200, 0})
    ->Unit(benchmark::kMillisecond);

void table2_runs(benchmark::State& state) {
  Table2Params params;
  params.n_values = {50};
  params.runs = 16;
  const auto exec = execution_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_table2(params, exec).rows.front().success_count);
}
BENCHMARK(table2_runs)->ArgName("workers")->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
