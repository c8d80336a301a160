#include "accumsim/memory.hpp"

#include <algorithm>

namespace accumsim {

IssueSchedule issue_batches(std::uint32_t banks, std::uint32_t queue_depth,
                            std::span<const RequestBatch> batches,
                            IssueMode mode) {
  if (banks == 0) throw std::invalid_argument("issue: need at least one bank");
  if (queue_depth == 0) throw std::invalid_argument("issue: queue depth must be >= 1");

  IssueSchedule out;
  out.service_cycle.resize(batches.size());
  for (std::size_t b = 0; b < batches.size(); ++b)
    out.service_cycle[b].resize(batches[b].requests.size(), 0);

  struct QueuedReq {
    std::size_t batch;
    std::size_t index;
  };
  std::vector<std::deque<QueuedReq>> queue(banks);

  std::size_t next_batch = 0;
  std::size_t next_req = 0;  // progress within the batch being admitted
  std::uint64_t outstanding = 0;
  std::uint64_t cycle = 0;
  std::uint64_t last_service = 0;
  bool any_service = false;

  while (next_batch < batches.size() || outstanding > 0) {
    // Admission at cycle start; requests are pushed in lane order and a full
    // target queue back-pressures the rest of the batch.
    while (next_batch < batches.size() &&
           batches[next_batch].arrival_cycle <= cycle) {
      if (mode == IssueMode::Blocking && next_req == 0 && outstanding > 0)
        break;  // younger batches stall behind the one in flight
      const auto& reqs = batches[next_batch].requests;
      bool stalled = false;
      while (next_req < reqs.size()) {
        const std::uint32_t bank = reqs[next_req].vertex % banks;
        if (queue[bank].size() >= queue_depth) {
          stalled = true;
          break;
        }
        queue[bank].push_back({next_batch, next_req});
        outstanding++;
        next_req++;
      }
      if (stalled) {
        out.backpressure_stall_cycles++;
        break;
      }
      next_batch++;
      next_req = 0;
      if (mode == IssueMode::Blocking) break;
    }

    for (std::uint32_t bank = 0; bank < banks; ++bank) {
      if (queue[bank].empty()) continue;
      const QueuedReq r = queue[bank].front();
      queue[bank].pop_front();
      out.service_cycle[r.batch][r.index] = cycle;
      last_service = cycle;
      any_service = true;
      outstanding--;
    }
    cycle++;
  }
  out.cycles = any_service ? last_service + 1 : 0;
  return out;
}

FetchResult fetch_edges(DramChannel& channel,
                        std::span<const VertexId> edge_array,
                        EdgeIndex address, std::uint32_t lanes_per_line,
                        std::uint64_t issue_cycle) {
  if (address >= edge_array.size())
    throw std::logic_error("fetch_edges: address beyond edge array");
  FetchResult out;
  out.batch.address = address;
  const EdgeIndex end =
      std::min<EdgeIndex>(address + lanes_per_line, edge_array.size());
  out.batch.lanes.resize(lanes_per_line);
  for (EdgeIndex i = address; i < end; ++i) {
    out.batch.lanes[i - address].source = edge_array[i];
  }
  out.delivery_cycle = channel.schedule_delivery(issue_cycle);
  return out;
}

}  // namespace accumsim
