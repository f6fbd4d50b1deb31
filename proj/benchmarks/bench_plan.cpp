#include <benchmark/benchmark.h>

#include "fsdpplan/bounds.hpp"
#include "fsdpplan/presets.hpp"
#include "fsdpplan/search.hpp"

// Planner hot paths. evaluate_point runs 20200 times per default grid search,
// so its cost bounds everything interactive; the grid benchmarks show the
// serial baseline and the thread scaling of one search.

using namespace fsdpplan;

namespace {

ModelSpec model() { return builtin_catalog().model_or_throw("13b"); }

ClusterSpec cluster() {
  ClusterSpec c = builtin_catalog().cluster_or_throw("40GB-A100-200Gbps");
  c.num_gpus = 512;
  return c;
}

}  // namespace

static void BM_evaluate_point(benchmark::State& state) {
  const ModelSpec m = model();
  const ClusterSpec c = cluster();
  TrainPlan p;
  p.gamma = 0.35;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_point(m, c, p));
  }
}
BENCHMARK(BM_evaluate_point);

static void BM_bound_report(benchmark::State& state) {
  const ModelSpec m = model();
  const ClusterSpec c = cluster();
  TrainPlan p;
  p.gamma = 0.35;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bound_report(m, c, p));
  }
}
BENCHMARK(BM_bound_report);

static void BM_grid_search(benchmark::State& state) {
  const ModelSpec m = model();
  const ClusterSpec c = cluster();
  SearchOptions opts;
  opts.num_threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_search(m, c, {}, std::nullopt, opts));
  }
  state.SetItemsProcessed(state.iterations() * GridParams{}.point_count());
}
BENCHMARK(BM_grid_search)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
