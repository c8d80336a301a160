#pragma once

#include <cstdint>
#include <vector>

#include "accumsim/types.hpp"

namespace accumsim {

// One destination vertex queued in a vertex unit: the half-open edge-offset
// interval [left_edge, right_edge) locates its edges in the edge array.
struct VertexWorkItem {
  VertexId vertex = 0;
  EdgeIndex left_edge = 0;
  EdgeIndex right_edge = 0;
};

// A fetched cacheline of edges after vertex matching: up to W source vertex
// IDs, each tagged with its destination and a last-edge-of-vertex flag.
// Destination tags are non-decreasing across lanes.
struct EdgeBatch {
  struct Lane {
    VertexId source = kInvalidVertex;
    VertexId dest = kInvalidVertex;
    bool last_edge_of_vertex = false;
  };
  EdgeIndex address = 0;  // edge index of the first lane
  std::vector<Lane> lanes;
};

// Cacheline addresses 0, W, 2W, ... covering all edges exactly once.
std::vector<EdgeIndex> generate_addresses(EdgeIndex total_edges,
                                          std::uint32_t lanes_per_line);

struct ScheduledVertex {
  VertexId vertex = 0;
  // Absolute edge range consumed for this vertex in this step.
  EdgeIndex first_edge = 0;
  EdgeIndex last_edge = 0;  // inclusive
  bool popped = false;      // all of the vertex's edges are now consumed
};

struct ScheduleStep {
  std::vector<ScheduledVertex> scheduled;  // at most num_units entries
  EdgeIndex consumed_begin = 0;
  EdgeIndex consumed_end = 0;  // half-open
  bool window_complete = false;
};

// Degree-aware vertex scheduling: work items are distributed round-robin
// across N vertex units in vertex-ID order (item k lives in unit k mod N);
// each cycle the unit heads whose offset interval intersects the current
// cacheline window are scheduled, and a head is removed once the window end
// reaches its right offset. Because the items tile the edge array, the unit
// heads are always the next N pending items, which is how this class stores
// them.
class VertexScheduler {
 public:
  VertexScheduler(std::vector<VertexWorkItem> items, std::uint32_t num_units);

  // One scheduling cycle for the window [address, window_end). Repeated
  // calls at the same address continue where the previous cycle stopped;
  // window_complete reports when every lane of the window has been handed
  // to a scheduled vertex.
  ScheduleStep step(EdgeIndex address, EdgeIndex window_end);

  bool exhausted() const { return next_item_ == items_.size(); }
  std::uint32_t num_units() const { return num_units_; }
  std::uint64_t pending_items() const { return items_.size() - next_item_; }

 private:
  std::vector<VertexWorkItem> items_;
  std::size_t next_item_ = 0;   // first item not yet popped
  EdgeIndex consumed_upto_ = 0; // next edge lane to hand out
  std::uint32_t num_units_ = 1;
};

}  // namespace accumsim
