#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "accumsim/graph.hpp"

namespace accumsim {

struct RearrangeConfig {
  // Number of on-chip memory banks; must be a power of two so the queue
  // selection (neighbor mod P) matches low-order-bit banking.
  std::uint32_t partition_count = 16;
};

// Balances each vertex's neighbor list across bank residue classes: the
// neighbors are distributed into P queues keyed by (neighbor mod P) in
// original order, then emitted round-robin starting at queue 0, skipping
// empty queues without consuming an emission slot. Offsets are unchanged and
// every per-vertex neighbor multiset is preserved. O(|E|).
Graph rearrange_edges(const Graph& g, const RearrangeConfig& cfg);

struct GraphPartition {
  std::uint32_t part_index = 0;
  // Half-open range of destination vertex IDs owned by this part.
  VertexId begin_vertex = 0;
  VertexId end_vertex = 0;
  // Same global vertex count as the input; only destinations inside the
  // range have edges.
  Graph sub_graph;
};

// Splits the destination vertices into k contiguous ID ranges of near-equal
// size (counts differ by at most one); each edge lands in the part owning
// its destination. Per-vertex neighbor order is preserved.
std::vector<GraphPartition> partition_by_destination(const Graph& g,
                                                     std::uint32_t k);

struct BankConflictProfile {
  // max-requests-per-bank -> number of batch windows with that maximum
  std::map<std::uint32_t, std::uint64_t> histogram;
  std::uint64_t windows = 0;

  double mean_max_per_bank() const;
};

// Slides non-overlapping windows of batch_width edges over the edge array in
// destination-major order and records, per window, the largest number of
// requests landing on one bank (neighbor mod P).
BankConflictProfile bank_conflict_profile(const Graph& g, std::uint32_t banks,
                                          std::uint32_t batch_width);

}  // namespace accumsim
