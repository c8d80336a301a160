#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "accumsim/accumulator.hpp"

using namespace accumsim;

namespace {

std::vector<TaggedValue<int>> run_batch(std::uint32_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TaggedValue<int>> batch(width);
  VertexId tag = 0;
  for (std::uint32_t i = 0; i < width; ++i) {
    if (rng() % 4 == 0) tag++;
    batch[i] = {static_cast<int>(rng() % 100), tag, true};
  }
  return batch;
}

void BM_SegmentedScan(benchmark::State& state) {
  const auto width = static_cast<std::uint32_t>(state.range(0));
  const auto net = ScanNetwork::build(width);
  const auto op = CombineOp<int>::add();
  const auto batch = run_batch(width, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.evaluate<int>(batch, op));
  }
  state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_SegmentedScan)->Arg(16)->Arg(64);

void BM_ScanNetworkBuild(benchmark::State& state) {
  const auto width = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScanNetwork::build(width));
  }
}
BENCHMARK(BM_ScanNetworkBuild)->Arg(16)->Arg(64);

}  // namespace
