#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "accumsim/accumulator.hpp"
#include "accumsim/scheduler.hpp"
#include "accumsim/types.hpp"

namespace accumsim {

enum class IssueMode : std::uint8_t { Blocking, OutOfOrder };

// ---------------------------------------------------------------------------
// Request-trace issue model
// ---------------------------------------------------------------------------

struct MemoryRequest {
  VertexId vertex = 0;  // bank = vertex mod P
  std::uint32_t lane = 0;
};

struct RequestBatch {
  std::vector<MemoryRequest> requests;
  std::uint64_t arrival_cycle = 0;
};

struct IssueSchedule {
  // service_cycle[b][i] = cycle request i of batch b was served
  std::vector<std::vector<std::uint64_t>> service_cycle;
  std::uint64_t cycles = 0;  // makespan: last service cycle + 1
  std::uint64_t backpressure_stall_cycles = 0;
};

// Serves a trace of request batches on P single-read-port banks. Blocking
// mode admits one batch at a time: a batch starts only after every request
// of the previous batch finished, so it completes in max-requests-per-bank
// cycles. Out-of-order mode admits batches as soon as every target bank
// queue has space, letting idle banks serve younger requests. Queue overflow
// back-pressures admission; requests are never dropped.
IssueSchedule issue_batches(std::uint32_t banks, std::uint32_t queue_depth,
                            std::span<const RequestBatch> batches,
                            IssueMode mode);

// ---------------------------------------------------------------------------
// Reorder buffer
// ---------------------------------------------------------------------------

// Restores original request order after out-of-order memory service. Slots
// are keyed by a token derived from the originating edge cacheline address;
// a slot holds one in-flight batch and releases it only when all its lanes
// have returned and every older batch has been released.
template <class Payload>
class ReorderBuffer {
 public:
  explicit ReorderBuffer(std::uint32_t capacity) : slots_(capacity) {
    if (capacity == 0 || (capacity & (capacity - 1)) != 0)
      throw std::invalid_argument("reorder: capacity must be a power of two");
  }

  std::uint32_t capacity() const {
    return static_cast<std::uint32_t>(slots_.size());
  }

  // Token rule: the low log2(m) bits of the cacheline index. Addresses are
  // W-aligned edge indexes, so the index, not the raw address, carries the
  // distinguishing bits.
  static std::uint64_t token_for_address(EdgeIndex cacheline_address,
                                         std::uint32_t lanes_per_line,
                                         std::uint32_t capacity) {
    return (cacheline_address / lanes_per_line) & (capacity - 1);
  }

  bool slot_free(std::uint64_t token) const { return !slots_[token].busy; }

  // Registers the next batch in request order. Returns false when the slot
  // is still held by an incomplete older batch (the caller must stall).
  bool begin_batch(std::uint64_t token, std::uint32_t lane_count) {
    Slot& slot = slots_[token];
    if (slot.busy) return false;
    slot.busy = true;
    slot.seq = next_seq_++;
    slot.expected = lane_count;
    slot.arrived = 0;
    slot.lanes.assign(lane_count, Payload{});
    slot.present.assign(lane_count, false);
    return true;
  }

  void arrive(std::uint64_t token, std::uint32_t lane, Payload payload) {
    Slot& slot = slots_[token];
    if (!slot.busy || lane >= slot.expected || slot.present[lane])
      throw std::logic_error("reorder: arrival does not match an open batch");
    slot.lanes[lane] = std::move(payload);
    slot.present[lane] = true;
    slot.arrived++;
  }

  struct Released {
    std::uint64_t seq = 0;
    std::vector<Payload> lanes;
  };

  // Releases the oldest batch if it is complete; strictly in request order.
  std::optional<Released> try_release() {
    for (Slot& slot : slots_) {
      if (!slot.busy || slot.seq != next_release_) continue;
      if (slot.arrived != slot.expected) return std::nullopt;
      Released out{slot.seq, std::move(slot.lanes)};
      slot.busy = false;
      next_release_++;
      return out;
    }
    return std::nullopt;
  }

 private:
  struct Slot {
    bool busy = false;
    std::uint64_t seq = 0;
    std::uint32_t expected = 0;
    std::uint32_t arrived = 0;
    std::vector<Payload> lanes;
    std::vector<bool> present;
  };
  std::vector<Slot> slots_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_release_ = 0;
};

// ---------------------------------------------------------------------------
// Off-chip edge channel
// ---------------------------------------------------------------------------

// Fixed-latency streaming channel: one cacheline per cycle peak. The edge
// traffic of the pipeline is fully sequential, which this first-order model
// stands in for.
class DramChannel {
 public:
  explicit DramChannel(std::uint32_t latency_cycles)
      : latency_(latency_cycles) {}

  std::uint32_t latency() const { return latency_; }

  // Schedules a fetch issued at `cycle`; returns the delivery cycle. At most
  // one delivery per cycle.
  std::uint64_t schedule_delivery(std::uint64_t cycle) {
    std::uint64_t ready = cycle + latency_;
    if (has_delivery_ && ready <= last_delivery_) ready = last_delivery_ + 1;
    last_delivery_ = ready;
    has_delivery_ = true;
    return ready;
  }

 private:
  std::uint32_t latency_;
  std::uint64_t last_delivery_ = 0;
  bool has_delivery_ = false;
};

struct FetchResult {
  EdgeBatch batch;
  std::uint64_t delivery_cycle = 0;
};

// Fetches the cacheline at `address` from the edge array. The tail line
// returns fewer valid lanes. Destination tags are attached later by the
// vertex-matching stage. Out-of-range addresses are a contract violation.
FetchResult fetch_edges(DramChannel& channel,
                        std::span<const VertexId> edge_array,
                        EdgeIndex address, std::uint32_t lanes_per_line,
                        std::uint64_t issue_cycle);

// ---------------------------------------------------------------------------
// Banked on-chip vertex memory
// ---------------------------------------------------------------------------

// Front/back storage plus per-bank request queues with one read and one
// write port per bank per cycle. Vertex v lives in bank (v mod P). Writes
// merge through the combine operator at commit time and become visible to
// reads one cycle later. In double-buffered (Jacobi) mode writes land in the
// back array while reads observe the front.
template <class T>
class BankedMemory {
 public:
  enum class ReadTarget : std::uint8_t { Front, Back, Timing };

  struct ReadDone {
    std::uint64_t client = 0;
    T value{};
  };
  struct WriteDone {
    VertexId vertex = 0;
    T old_value{};
    T new_value{};
  };

  BankedMemory(std::uint32_t banks, std::uint32_t queue_depth,
               std::vector<T>* front, std::vector<T>* back,
               CombineOp<T> op)
      : banks_(banks),
        queue_depth_(queue_depth),
        front_(front),
        back_(back),
        op_(op),
        read_q_(banks),
        write_q_(banks) {
    if (banks == 0 || (banks & (banks - 1)) != 0)
      throw std::invalid_argument("banked memory: P must be a power of two");
  }

  std::uint32_t bank_of(VertexId v) const { return v % banks_; }

  bool read_space(std::uint32_t bank) const {
    return read_q_[bank].size() < queue_depth_;
  }
  bool write_space(std::uint32_t bank) const {
    return write_q_[bank].size() < queue_depth_;
  }

  void push_read(VertexId v, ReadTarget target, std::uint64_t client) {
    read_q_[bank_of(v)].push_back({v, target, client});
    pending_reads_++;
  }
  void push_write(VertexId v, T value) {
    write_q_[bank_of(v)].push_back({v, value});
    pending_writes_++;
  }

  bool idle() const { return pending_reads_ == 0 && pending_writes_ == 0; }
  std::uint64_t reads_served() const { return reads_served_; }
  std::uint64_t writes_served() const { return writes_served_; }
  std::uint64_t read_busy_cycles() const { return read_busy_cycles_; }
  std::uint64_t write_wait_cycles() const { return write_wait_cycles_; }

  // One cycle: every bank serves at most one read and commits at most one
  // write. Reads observe the state before this cycle's writes.
  void tick(std::vector<ReadDone>& reads_done,
            std::vector<WriteDone>& writes_done) {
    reads_done.clear();
    writes_done.clear();
    bool any_read = false;
    for (auto& q : read_q_) {
      if (q.empty()) continue;
      const ReadReq req = q.front();
      q.pop_front();
      pending_reads_--;
      any_read = true;
      reads_served_++;
      T value{};
      if (req.target == ReadTarget::Front) value = (*front_)[req.vertex];
      else if (req.target == ReadTarget::Back) value = (*back_)[req.vertex];
      reads_done.push_back({req.client, value});
    }
    if (any_read) read_busy_cycles_++;
    for (auto& q : write_q_) {
      if (q.empty()) continue;
      const WriteReq req = q.front();
      q.pop_front();
      pending_writes_--;
      writes_served_++;
      std::vector<T>& target = back_ ? *back_ : *front_;
      const T old_value = target[req.vertex];
      const T new_value = op_(old_value, req.value);
      target[req.vertex] = new_value;
      writes_done.push_back({req.vertex, old_value, new_value});
      if (!q.empty()) write_wait_cycles_++;
    }
  }

 private:
  struct ReadReq {
    VertexId vertex;
    ReadTarget target;
    std::uint64_t client;
  };
  struct WriteReq {
    VertexId vertex;
    T value;
  };

  std::uint32_t banks_;
  std::uint32_t queue_depth_;
  std::vector<T>* front_;
  std::vector<T>* back_;  // null for in-place algorithms
  CombineOp<T> op_;
  std::vector<std::deque<ReadReq>> read_q_;
  std::vector<std::deque<WriteReq>> write_q_;
  std::uint64_t pending_reads_ = 0;
  std::uint64_t pending_writes_ = 0;
  std::uint64_t reads_served_ = 0;
  std::uint64_t writes_served_ = 0;
  std::uint64_t read_busy_cycles_ = 0;
  std::uint64_t write_wait_cycles_ = 0;
};

}  // namespace accumsim
