#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "accumsim/algorithms.hpp"
#include "accumsim/graph.hpp"
#include "accumsim/stats.hpp"
#include "accumsim/types.hpp"

namespace accumsim {

// Pipeline configurations. Serialized is the atomic-protected reference
// pipeline (same-destination updates occupy the update stage one per cycle,
// distinct destinations update in parallel). Baseline processes one edge per
// cycle. The CFG steps are cumulative:
//   Cfg1 source vertex accumulation (one vertex scheduled per cycle)
//   Cfg2 + destination vertex accumulators behind a crossbar
//   Cfg3 + degree-aware scheduling across N vertex pipelines
//   Cfg4 + bank-aware edge rearranging
//   Cfg5 + out-of-order vertex memory with reorder buffer
enum class Mode : std::uint8_t {
  Serialized,
  Baseline,
  Cfg1,
  Cfg2,
  Cfg3,
  Cfg4,
  Cfg5,
};

const char* mode_name(Mode mode);
Mode mode_from_string(const std::string& name);

enum class MemoryOrder : std::uint8_t { Blocking, OutOfOrder };

struct PipelineConfig {
  Mode mode = Mode::Cfg5;
  std::uint32_t vertex_pipelines = 8;     // N
  std::uint32_t edge_lanes = 16;          // W (512-bit line / 32-bit edges)
  std::uint32_t banks = 16;               // P
  std::uint32_t bank_queue_depth = 8;
  std::uint32_t reorder_capacity = 16;    // m
  std::uint32_t dest_replicas = 8;
  std::uint32_t dram_latency = 40;
  std::uint32_t prefetch_depth = 64;      // outstanding edge lines
  std::uint64_t onchip_bytes = 4ull << 20;
  bool ideal_vertex_memory = false;       // any 16 requests served per cycle
  std::uint32_t rmw_latency = 2;          // combine turnaround without a
                                          // destination accumulator
  std::uint32_t pipeline_stages = 6;

  void validate() const;

  std::uint32_t effective_vertex_parallelism() const {
    switch (mode) {
      case Mode::Serialized:
      case Mode::Baseline:
        return edge_lanes;  // whole-window batches, no vertex-count limit
      case Mode::Cfg1:
      case Mode::Cfg2:
        return 1;
      default:
        return vertex_pipelines;
    }
  }
  bool uses_accumulator() const { return mode >= Mode::Cfg1; }
  bool uses_dest_accumulator() const { return mode >= Mode::Cfg2; }
  bool uses_rearranged_edges() const { return mode >= Mode::Cfg4; }
  MemoryOrder memory_order() const {
    return mode >= Mode::Cfg5 ? MemoryOrder::OutOfOrder : MemoryOrder::Blocking;
  }
};

// Raised when a partition's vertex data does not fit on chip.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
struct RunResult {
  std::vector<T> states;
  SimStats stats;
};

// Runs the six-stage pipeline over the graph until the algorithm terminates.
// With partitions > 1 each iteration walks the destination-range parts in
// order and the per-part vertex data reload traffic is charged.
template <class T>
RunResult<T> run(const Graph& g, const AlgorithmSpec<T>& spec,
                 const PipelineConfig& cfg, std::uint32_t partitions = 1);

// The atomic-protection reference measurement: same pipeline, Serialized
// mode. Results still match the oracle; only timing differs.
template <class T>
SimStats run_serialized_baseline(const Graph& g, const AlgorithmSpec<T>& spec,
                                 PipelineConfig cfg);

struct SweepRow {
  std::string label;
  Mode mode = Mode::Baseline;
  std::uint32_t vertex_pipelines = 0;
  std::uint32_t partitions = 1;
  SimStats stats;
  double speedup = 1.0;  // against the Baseline row's cycles
};

// Runs the requested modes plus a vertex-pipeline sweep (Cfg3 scheduling
// with ideal vertex memory, isolating the degree-aware effect). Speedups are
// normalized to the Baseline mode, which is always measured.
template <class T>
std::vector<SweepRow> ablation_sweep(const Graph& g,
                                     const AlgorithmSpec<T>& spec,
                                     const PipelineConfig& base,
                                     std::span<const Mode> modes,
                                     std::span<const std::uint32_t> pipeline_counts);

extern template RunResult<std::uint8_t> run(const Graph&, const AlgorithmSpec<std::uint8_t>&, const PipelineConfig&, std::uint32_t);
extern template RunResult<std::uint32_t> run(const Graph&, const AlgorithmSpec<std::uint32_t>&, const PipelineConfig&, std::uint32_t);
extern template RunResult<float> run(const Graph&, const AlgorithmSpec<float>&, const PipelineConfig&, std::uint32_t);
extern template SimStats run_serialized_baseline(const Graph&, const AlgorithmSpec<std::uint8_t>&, PipelineConfig);
extern template SimStats run_serialized_baseline(const Graph&, const AlgorithmSpec<std::uint32_t>&, PipelineConfig);
extern template SimStats run_serialized_baseline(const Graph&, const AlgorithmSpec<float>&, PipelineConfig);
extern template std::vector<SweepRow> ablation_sweep(const Graph&, const AlgorithmSpec<std::uint8_t>&, const PipelineConfig&, std::span<const Mode>, std::span<const std::uint32_t>);
extern template std::vector<SweepRow> ablation_sweep(const Graph&, const AlgorithmSpec<std::uint32_t>&, const PipelineConfig&, std::span<const Mode>, std::span<const std::uint32_t>);
extern template std::vector<SweepRow> ablation_sweep(const Graph&, const AlgorithmSpec<float>&, const PipelineConfig&, std::span<const Mode>, std::span<const std::uint32_t>);

}  // namespace accumsim
