#include "accumsim/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace accumsim {

std::vector<EdgeIndex> generate_addresses(EdgeIndex total_edges,
                                          std::uint32_t lanes_per_line) {
  if (lanes_per_line == 0)
    throw std::invalid_argument("generate_addresses: W must be >= 1");
  std::vector<EdgeIndex> addresses;
  addresses.reserve((total_edges + lanes_per_line - 1) / lanes_per_line);
  for (EdgeIndex a = 0; a < total_edges; a += lanes_per_line)
    addresses.push_back(a);
  return addresses;
}

VertexScheduler::VertexScheduler(std::vector<VertexWorkItem> items,
                                 std::uint32_t num_units)
    : items_(std::move(items)), num_units_(num_units) {
  if (num_units_ == 0)
    throw std::invalid_argument("scheduler: need at least one vertex unit");
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].left_edge >= items_[i].right_edge)
      throw std::invalid_argument("scheduler: empty work item interval");
    if (i > 0 && items_[i].left_edge != items_[i - 1].right_edge)
      throw std::invalid_argument("scheduler: work items must tile the edge array");
  }
}

ScheduleStep VertexScheduler::step(EdgeIndex address, EdgeIndex window_end) {
  ScheduleStep out;
  out.consumed_begin = std::max(address, consumed_upto_);
  out.consumed_end = out.consumed_begin;

  std::size_t popped = 0;
  for (std::uint32_t u = 0; u < num_units_; ++u) {
    const std::size_t idx = next_item_ + u;
    if (idx >= items_.size()) break;
    const VertexWorkItem& item = items_[idx];
    if (item.left_edge >= window_end) break;  // beyond this cacheline
    ScheduledVertex sv;
    sv.vertex = item.vertex;
    sv.first_edge = std::max(item.left_edge, out.consumed_begin);
    sv.last_edge = std::min(item.right_edge, window_end) - 1;
    sv.popped = window_end >= item.right_edge;
    out.consumed_end = sv.last_edge + 1;
    out.scheduled.push_back(sv);
    if (sv.popped) ++popped;
  }
  next_item_ += popped;
  consumed_upto_ = out.consumed_end;
  out.window_complete = consumed_upto_ >= window_end;
  return out;
}

}  // namespace accumsim
