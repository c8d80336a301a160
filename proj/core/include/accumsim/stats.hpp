#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace accumsim {

// Cycle-level accounting. Every simulated cycle is either productive (the
// update stage advanced) or attributed to exactly one stall cause, so
// productive_cycles + stalls.total() == total_cycles.
struct StallBreakdown {
  std::uint64_t atomic = 0;
  std::uint64_t bank_conflict = 0;
  std::uint64_t reorder = 0;
  std::uint64_t scheduler = 0;
  std::uint64_t crossbar = 0;
  std::uint64_t dram = 0;

  std::uint64_t total() const {
    return atomic + bank_conflict + reorder + scheduler + crossbar + dram;
  }
};

struct SimStats {
  std::uint32_t schema_version = 1;
  std::uint64_t total_cycles = 0;
  std::uint64_t productive_cycles = 0;
  std::uint64_t edges_traversed = 0;
  double teps = 0.0;
  StallBreakdown stalls;
  std::uint64_t iterations = 0;
  std::uint32_t partitions = 1;
  std::vector<std::uint64_t> sub_iterations;  // per partition

  // Stage and event counters.
  std::uint64_t update_stage_busy_cycles = 0;
  std::uint64_t source_read_requests = 0;
  std::uint64_t dest_read_requests = 0;
  std::uint64_t writeback_requests = 0;
  std::uint64_t crossbar_collisions = 0;
  std::uint64_t reorder_token_stalls = 0;
  std::uint64_t oversubscribed_windows = 0;
  std::uint64_t bank_read_busy_cycles = 0;
  std::uint64_t write_wait_cycles = 0;
  std::uint64_t partition_reload_cycles = 0;

  // Name of the top stall bucket, for one-line summaries.
  std::string top_stall_cause() const;
};

}  // namespace accumsim
