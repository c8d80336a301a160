#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "accumsim/memory.hpp"

using namespace accumsim;

namespace {

std::vector<RequestBatch> uniform_trace(std::size_t batches, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RequestBatch> trace(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    trace[b].arrival_cycle = b;
    for (std::uint32_t r = 0; r < 16; ++r)
      trace[b].requests.push_back({static_cast<VertexId>(rng() % 4096), r});
  }
  return trace;
}

void BM_IssueBlocking(benchmark::State& state) {
  const auto trace = uniform_trace(256, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(issue_batches(16, 8, trace, IssueMode::Blocking));
  }
  state.SetItemsProcessed(state.iterations() * 256 * 16);
}
BENCHMARK(BM_IssueBlocking);

void BM_IssueOutOfOrder(benchmark::State& state) {
  const auto trace = uniform_trace(256, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(issue_batches(16, 8, trace, IssueMode::OutOfOrder));
  }
  state.SetItemsProcessed(state.iterations() * 256 * 16);
}
BENCHMARK(BM_IssueOutOfOrder);

}  // namespace
