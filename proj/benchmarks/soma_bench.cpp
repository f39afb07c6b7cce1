#include <benchmark/benchmark.h>

#include "soma/canonical.hpp"
#include "soma/landmarks.hpp"
#include "soma/metrics.hpp"
#include "soma/sat.hpp"
#include "soma/search.hpp"

namespace {

soma::StrategyConfig config(soma::Ordering o, bool prune, soma::StopMode mode = soma::StopMode::FirstSolution) {
  soma::StrategyConfig c;
  c.ordering = o;
  c.pruning = prune;
  c.seed = 1;
  c.stop_mode = mode;
  return c;
}

void BM_CatalogBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(soma::Catalog(soma::standard_pieces()));
}
BENCHMARK(BM_CatalogBuild)->Unit(benchmark::kMicrosecond);

void BM_Canonicalize(benchmark::State& state) {
  const auto s = soma::solve(config(soma::Ordering::CellOrdered, false)).solutions.at(0);
  for (auto _ : state) benchmark::DoNotOptimize(soma::canonicalize(s));
}
BENCHMARK(BM_Canonicalize);

void BM_SolveFirst(benchmark::State& state) {
  const auto o = static_cast<soma::Ordering>(state.range(0));
  const bool prune = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(soma::solve(config(o, prune)));
}
BENCHMARK(BM_SolveFirst)
    ->ArgsProduct({{0, 1, 2, 3}, {0, 1}})
    ->ArgNames({"ordering", "prune"})
    ->Unit(benchmark::kMillisecond);

void BM_SolveExhaustive(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(soma::solve(config(soma::Ordering::CellOrdered, true, soma::StopMode::Exhaustive)));
}
BENCHMARK(BM_SolveExhaustive)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_DpllFirstModel(benchmark::State& state) {
  const auto f = soma::sat::encode();
  for (auto _ : state) benchmark::DoNotOptimize(soma::sat::dpll_solve(f));
}
BENCHMARK(BM_DpllFirstModel)->Unit(benchmark::kMillisecond);

void BM_SampleBranching(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(soma::sample_branching(depth, 1000, 7));
}
BENCHMARK(BM_SampleBranching)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_EffectiveBf(benchmark::State& state) {
  double n = 861285;
  for (auto _ : state) benchmark::DoNotOptimize(soma::effective_bf(n));
}
BENCHMARK(BM_EffectiveBf);

void BM_LandmarkBuild(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(soma::build_table(static_cast<int>(state.range(0)), config(soma::Ordering::CellOrdered, false)));
}
BENCHMARK(BM_LandmarkBuild)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
