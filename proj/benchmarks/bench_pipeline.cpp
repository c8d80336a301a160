#include <benchmark/benchmark.h>

#include "accumsim/algorithms.hpp"
#include "accumsim/graph.hpp"
#include "accumsim/simulator.hpp"

using namespace accumsim;

namespace {

const Graph& bench_graph() {
  static const Graph g = generate_powerlaw(1 << 14, 8.0, 2.0, 11);
  return g;
}

void BM_PipelineBfs(benchmark::State& state) {
  const Graph& g = bench_graph();
  PipelineConfig cfg;
  cfg.mode = static_cast<Mode>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(g, bfs_spec(0), cfg));
  }
  state.SetItemsProcessed(state.iterations() * g.num_edges());
}
BENCHMARK(BM_PipelineBfs)
    ->Arg(static_cast<int>(Mode::Baseline))
    ->Arg(static_cast<int>(Mode::Cfg3))
    ->Arg(static_cast<int>(Mode::Cfg5));

void BM_PipelinePageRank(benchmark::State& state) {
  const Graph& g = bench_graph();
  PipelineConfig cfg;
  cfg.mode = Mode::Cfg5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(g, pagerank_spec(0.15, 2), cfg));
  }
  state.SetItemsProcessed(state.iterations() * g.num_edges() * 2);
}
BENCHMARK(BM_PipelinePageRank);

}  // namespace
