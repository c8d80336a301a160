#include "accumsim/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <optional>

#include "accumsim/memory.hpp"
#include "accumsim/preprocess.hpp"
#include "accumsim/scheduler.hpp"

namespace accumsim {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Serialized: return "serialized";
    case Mode::Baseline: return "baseline";
    case Mode::Cfg1: return "cfg1";
    case Mode::Cfg2: return "cfg2";
    case Mode::Cfg3: return "cfg3";
    case Mode::Cfg4: return "cfg4";
    case Mode::Cfg5: return "cfg5";
  }
  return "?";
}

Mode mode_from_string(const std::string& name) {
  for (Mode m : {Mode::Serialized, Mode::Baseline, Mode::Cfg1, Mode::Cfg2,
                 Mode::Cfg3, Mode::Cfg4, Mode::Cfg5}) {
    if (name == mode_name(m)) return m;
  }
  throw std::invalid_argument("unknown pipeline mode: " + name);
}

namespace {

bool is_pow2(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

void PipelineConfig::validate() const {
  if (!is_pow2(edge_lanes)) throw std::invalid_argument("config: W must be a power of two");
  if (!is_pow2(banks)) throw std::invalid_argument("config: bank count must be a power of two");
  if (!is_pow2(reorder_capacity)) throw std::invalid_argument("config: reorder capacity must be a power of two");
  if (!is_pow2(dest_replicas)) throw std::invalid_argument("config: replica count must be a power of two");
  if (vertex_pipelines == 0) throw std::invalid_argument("config: need at least one vertex pipeline");
  if (bank_queue_depth == 0) throw std::invalid_argument("config: bank queue depth must be >= 1");
  if (prefetch_depth == 0) throw std::invalid_argument("config: prefetch depth must be >= 1");
}

namespace {

constexpr std::uint32_t kRmwCapacity = 8;
constexpr std::uint64_t kPhantomClient = ~0ull;
constexpr std::uint64_t kRmwClientBit = 1ull << 62;

template <class T>
struct VertexState {
  std::vector<T> front;
  std::vector<T> back;
  bool double_buffered = false;
  bool frontier_driven = false;
  std::vector<std::uint8_t> cur_frontier;
  std::vector<std::uint8_t> next_frontier;
};

// One scheduler emission: the accumulator's input batch. Lanes are the edges
// consumed in one scheduling cycle, tagged with their destinations.
template <class T>
struct FlowBatch {
  std::uint64_t seq = 0;
  std::uint64_t line = 0;
  bool last_of_line = false;
  std::uint32_t lane_count = 0;
  std::vector<VertexId> sources;
  std::vector<VertexId> dests;
  std::vector<T> raw;  // source payloads, filled by read completions
  std::vector<std::uint32_t> last_lanes;  // multiplexer selects, batch-relative
  std::uint32_t issued_lanes = 0;
  std::uint32_t reads_pending = 0;
};

struct PartData {
  std::vector<VertexId> edges;
  std::vector<VertexWorkItem> items;
  std::uint64_t vertex_count = 0;
};

std::vector<PartData> build_parts(const Graph& g, const PipelineConfig& cfg,
                                  std::uint32_t partitions) {
  std::vector<PartData> parts;
  auto make_part = [](const Graph& pg, VertexId begin, VertexId end) {
    PartData part;
    part.vertex_count = end - begin;
    part.edges = pg.neighbors;
    for (VertexId v = begin; v < end; ++v) {
      if (pg.offsets[v + 1] > pg.offsets[v])
        part.items.push_back({v, pg.offsets[v], pg.offsets[v + 1]});
    }
    return part;
  };
  const RearrangeConfig rcfg{cfg.banks};
  if (partitions == 1) {
    const Graph work = cfg.uses_rearranged_edges() ? rearrange_edges(g, rcfg) : g;
    parts.push_back(make_part(work, 0, static_cast<VertexId>(g.num_vertices())));
  } else {
    for (auto& gp : partition_by_destination(g, partitions)) {
      const Graph work = cfg.uses_rearranged_edges()
                             ? rearrange_edges(gp.sub_graph, rcfg)
                             : std::move(gp.sub_graph);
      parts.push_back(make_part(work, gp.begin_vertex, gp.end_vertex));
    }
  }
  return parts;
}

template <class T>
class PassEngine {
 public:
  PassEngine(std::span<const VertexId> edges,
             std::span<const VertexWorkItem> items, VertexState<T>& state,
             std::span<const std::uint32_t> out_deg,
             const AlgorithmSpec<T>& spec, const PipelineConfig& cfg,
             SimStats& stats)
      : edges_(edges),
        state_(state),
        out_deg_(out_deg),
        spec_(spec),
        cfg_(cfg),
        stats_(stats),
        scheduler_(std::vector<VertexWorkItem>(items.begin(), items.end()),
                   cfg.effective_vertex_parallelism()),
        channel_(cfg.dram_latency),
        mem_(cfg.banks, cfg.bank_queue_depth, &state.front,
             state.double_buffered ? &state.back : nullptr, spec.combine),
        scan_(ScanNetwork::build(cfg.edge_lanes)),
        lines_((edges.size() + cfg.edge_lanes - 1) / cfg.edge_lanes),
        token_slots_(cfg.reorder_capacity),
        replicas_(cfg.dest_replicas),
        rmw_(kRmwCapacity),
        lane_buffer_(cfg.edge_lanes),
        replica_used_(cfg.dest_replicas, false) {}

  std::uint64_t run();

 private:
  struct CycleFlags {
    bool retired = false;
    bool accum_atomic = false;
    bool accum_route = false;
    bool accum_write = false;
    bool release_reads = false;
    bool pipeline_fill = false;
    bool issue_token = false;
    bool issue_gate = false;
    bool issue_capacity = false;
    bool no_window = false;
    bool route_collision = false;
    bool route_write = false;
  };

  struct TokenSlot {
    bool busy = false;
    std::uint64_t line = 0;
    std::uint32_t outstanding = 0;
    bool closed = false;
  };

  struct RmwEntry {
    bool live = false;
    VertexId tag = 0;
    T partial{};
    enum class Phase : std::uint8_t { NeedRead, WaitData, Turnaround, NeedWrite, WaitCommit } phase{};
    std::uint32_t wait = 0;
  };

  bool stream_done() const {
    return next_line_ == lines_ && dram_q_.empty() && line_buf_.empty() &&
           !window_open_ && sched_q_.empty() && inflight_.empty() && !hold_;
  }
  bool rmw_empty() const {
    for (const auto& e : rmw_) if (e.live) return false;
    return true;
  }
  bool replicas_empty() const {
    for (const auto& r : replicas_) if (r.held()) return false;
    return true;
  }
  bool drained() const {
    return stream_done() && pending_results_.empty() && rmw_empty() &&
           replicas_empty() && mem_.idle();
  }

  T lane_value(VertexId source, T raw) const {
    if (state_.frontier_driven && !state_.cur_frontier[source])
      return spec_.combine.identity;
    return spec_.scatter(raw, out_deg_[source]);
  }

  void apply_write_now(VertexId v, T value) {
    std::vector<T>& target = state_.double_buffered ? state_.back : state_.front;
    const T merged = spec_.combine(target[v], value);
    if (merged != target[v]) {
      target[v] = merged;
      if (state_.frontier_driven) state_.next_frontier[v] = 1;
    }
  }

  void emit_writeback(VertexId v, T value) {
    stats_.writeback_requests++;
    if (cfg_.ideal_vertex_memory) {
      apply_write_now(v, value);
    } else {
      mem_.push_write(v, value);
    }
  }

  void process_completions() {
    for (const auto& rd : reads_done_) {
      if (rd.client == kPhantomClient) continue;
      if (rd.client & kRmwClientBit) {
        RmwEntry& e = rmw_[rd.client & 0xff];
        e.phase = RmwEntry::Phase::Turnaround;
        e.wait = cfg_.rmw_latency;
        continue;
      }
      const std::uint64_t seq = rd.client >> 8;
      const std::uint32_t lane = rd.client & 0xff;
      for (auto& b : inflight_) {
        if (b.seq != seq) continue;
        b.raw[lane] = rd.value;
        b.reads_pending--;
        src_reads_outstanding_--;
        break;
      }
    }
    for (const auto& wd : writes_done_) {
      if (wd.new_value != wd.old_value && state_.frontier_driven)
        state_.next_frontier[wd.vertex] = 1;
      for (auto& e : rmw_) {
        if (e.live && e.phase == RmwEntry::Phase::WaitCommit && e.tag == wd.vertex) {
          e.live = false;
          break;
        }
      }
    }
  }

  void tick_rmw() {
    for (std::uint32_t i = 0; i < rmw_.size(); ++i) {
      RmwEntry& e = rmw_[i];
      if (!e.live) continue;
      switch (e.phase) {
        case RmwEntry::Phase::NeedRead: {
          if (cfg_.ideal_vertex_memory) {
            stats_.dest_read_requests++;
            e.phase = RmwEntry::Phase::Turnaround;
            e.wait = cfg_.rmw_latency;
            break;
          }
          const std::uint32_t bank = mem_.bank_of(e.tag);
          if (mem_.read_space(bank)) {
            mem_.push_read(e.tag, BankedMemory<T>::ReadTarget::Timing,
                           kRmwClientBit | i);
            stats_.dest_read_requests++;
            e.phase = RmwEntry::Phase::WaitData;
          }
          break;
        }
        case RmwEntry::Phase::WaitData:
          break;  // read completion advances the phase
        case RmwEntry::Phase::Turnaround:
          if (e.wait > 0) e.wait--;
          if (e.wait == 0) e.phase = RmwEntry::Phase::NeedWrite;
          break;
        case RmwEntry::Phase::NeedWrite: {
          if (cfg_.ideal_vertex_memory) {
            stats_.writeback_requests++;
            apply_write_now(e.tag, e.partial);
            e.live = false;
            break;
          }
          const std::uint32_t bank = mem_.bank_of(e.tag);
          if (mem_.write_space(bank)) {
            stats_.writeback_requests++;
            mem_.push_write(e.tag, e.partial);
            e.phase = RmwEntry::Phase::WaitCommit;
          }
          break;
        }
        case RmwEntry::Phase::WaitCommit:
          break;  // write commit clears the entry
      }
    }
  }

  bool rmw_admit(VertexId tag, T value) {
    for (const auto& e : rmw_) {
      if (e.live && e.tag == tag) return false;
    }
    for (std::uint32_t i = 0; i < rmw_.size(); ++i) {
      if (rmw_[i].live) continue;
      rmw_[i] = RmwEntry{true, tag, value, RmwEntry::Phase::NeedRead, 0};
      return true;
    }
    return false;
  }

  void tick_route(CycleFlags& flags) {
    if (pending_results_.empty()) return;
    std::fill(replica_used_.begin(), replica_used_.end(), false);
    while (route_cursor_ < pending_results_.size()) {
      const AccumulatedResult<T>& r = pending_results_[route_cursor_];
      const std::uint32_t rep = r.tag % cfg_.dest_replicas;
      if (replica_used_[rep]) {
        stats_.crossbar_collisions++;
        flags.route_collision = true;
        break;
      }
      DestAccumulator<T>& acc = replicas_[rep];
      if (acc.held() && acc.held()->first != r.tag && !cfg_.ideal_vertex_memory &&
          !mem_.write_space(mem_.bank_of(acc.held()->first))) {
        flags.route_write = true;
        break;
      }
      if (auto wb = acc.feed(r, spec_.combine)) emit_writeback(wb->first, wb->second);
      replica_used_[rep] = true;
      route_cursor_++;
    }
    if (route_cursor_ == pending_results_.size()) {
      pending_results_.clear();
      route_cursor_ = 0;
    }
  }

  // Serialized/Baseline update stage: each cycle a quota of lanes performs
  // its read-modify-write against the vertex memory; further lanes of the
  // same destination wait, which is the atomic serialization.
  void tick_plain_update(CycleFlags& flags) {
    FlowBatch<T>& b = *hold_;
    std::uint32_t quota = 1;
    if (cfg_.mode == Mode::Serialized) {
      quota = (b.lane_count + occupancy_planned_ - 1) / occupancy_planned_;
    }
    std::uint32_t emitted = 0;
    while (emitted < quota && drip_cursor_ < b.lane_count) {
      const VertexId dest = b.dests[drip_cursor_];
      if (!cfg_.ideal_vertex_memory) {
        const std::uint32_t bank = mem_.bank_of(dest);
        if (!mem_.read_space(bank) || !mem_.write_space(bank)) break;
        mem_.push_read(dest, BankedMemory<T>::ReadTarget::Timing, kPhantomClient);
      }
      stats_.dest_read_requests++;
      emit_writeback(dest, lane_value(b.sources[drip_cursor_], b.raw[drip_cursor_]));
      drip_cursor_++;
      emitted++;
    }
    if (emitted == 0) {
      flags.accum_write = true;
      return;
    }
    flags.retired = true;
    stats_.update_stage_busy_cycles++;
    if (drip_cursor_ == b.lane_count) {
      hold_.reset();
      drip_cursor_ = 0;
    }
  }

  void tick_accum(CycleFlags& flags) {
    if (!hold_) {
      if (stream_done() && pending_results_.empty() && rmw_empty()) {
        // End of stream: flush the destination accumulator registers.
        bool flushed = false;
        for (auto& acc : replicas_) {
          if (!acc.held()) continue;
          if (!cfg_.ideal_vertex_memory &&
              !mem_.write_space(mem_.bank_of(acc.held()->first))) {
            flags.route_write = true;
            continue;
          }
          auto wb = acc.flush();
          emit_writeback(wb->first, wb->second);
          flushed = true;
        }
        if (flushed) flags.retired = true;
      }
      return;
    }
    if (!cfg_.uses_accumulator()) {
      tick_plain_update(flags);
      return;
    }

    FlowBatch<T>& b = *hold_;
    if (!cfg_.uses_dest_accumulator()) {
      // Cfg1: one scheduled vertex per batch merged through the
      // read-modify-write unit; back-to-back accumulations of one vertex
      // serialize on the write-back round trip.
      const VertexId tag = b.dests[b.last_lanes[0]];
      for (const auto& e : rmw_) {
        if (e.live && e.tag == tag) {
          flags.accum_atomic = true;
          return;
        }
      }
      if (!rmw_admit(tag, evaluate_single(b))) {
        flags.accum_atomic = true;
        return;
      }
    } else {
      if (!pending_results_.empty()) {
        flags.accum_route = true;
        return;
      }
      evaluate_batch(b);
    }
    stats_.update_stage_busy_cycles++;
    flags.retired = true;
    hold_.reset();
  }

  // A single-vertex batch's scan + multiplexer collapses to one fold.
  T evaluate_single(const FlowBatch<T>& b) const {
    T acc = lane_value(b.sources[0], b.raw[0]);
    for (std::uint32_t i = 1; i <= b.last_lanes[0]; ++i)
      acc = spec_.combine(acc, lane_value(b.sources[i], b.raw[i]));
    return acc;
  }

  void evaluate_batch(const FlowBatch<T>& b) {
    for (std::uint32_t i = 0; i < cfg_.edge_lanes; ++i) {
      if (i < b.lane_count) {
        lane_buffer_[i] = {lane_value(b.sources[i], b.raw[i]), b.dests[i], true};
      } else {
        lane_buffer_[i] = {spec_.combine.identity, kInvalidVertex, false};
      }
    }
    const std::vector<T> scanned = scan_.template evaluate<T>(
        {lane_buffer_.data(), lane_buffer_.size()}, spec_.combine);
    pending_results_ = select_results<T>(
        {scanned.data(), scanned.size()},
        {lane_buffer_.data(), lane_buffer_.size()},
        {b.last_lanes.data(), b.last_lanes.size()});
    route_cursor_ = 0;
  }

  void tick_release(CycleFlags& flags) {
    if (hold_ || inflight_.empty()) return;
    FlowBatch<T>& head = inflight_.front();
    if (head.issued_lanes < head.lane_count || head.reads_pending > 0) {
      flags.release_reads = true;
      return;
    }
    // Free the reorder slot once the line's last batch leaves it.
    TokenSlot& slot = token_slots_[head.line & (cfg_.reorder_capacity - 1)];
    slot.outstanding--;
    if (head.last_of_line) slot.closed = true;
    if (slot.closed && slot.outstanding == 0) slot.busy = false;

    hold_ = std::move(head);
    inflight_.pop_front();
    drip_cursor_ = 0;
    if (!cfg_.uses_accumulator()) {
      if (cfg_.mode == Mode::Serialized) {
        std::uint32_t run = 1, best = 1;
        for (std::uint32_t i = 1; i < hold_->lane_count; ++i) {
          run = hold_->dests[i] == hold_->dests[i - 1] ? run + 1 : 1;
          best = std::max(best, run);
        }
        occupancy_planned_ = best;
      } else {
        occupancy_planned_ = hold_->lane_count;
      }
    }
    flags.pipeline_fill = true;
  }

  void tick_issue(CycleFlags& flags) {
    if (!partial_issue_) {
      if (sched_q_.empty()) return;
      if (cfg_.memory_order() == MemoryOrder::Blocking &&
          src_reads_outstanding_ > 0) {
        flags.issue_gate = true;
        return;
      }
      FlowBatch<T>& b = sched_q_.front();
      TokenSlot& slot = token_slots_[b.line & (cfg_.reorder_capacity - 1)];
      if (slot.busy && slot.line != b.line) {
        flags.issue_token = true;
        stats_.reorder_token_stalls++;
        return;
      }
      if (!slot.busy) {
        slot.busy = true;
        slot.line = b.line;
        slot.outstanding = 0;
        slot.closed = false;
      }
      slot.outstanding++;
      inflight_.push_back(std::move(b));
      sched_q_.pop_front();
      partial_issue_ = true;
    }
    FlowBatch<T>& b = inflight_.back();
    if (cfg_.ideal_vertex_memory) {
      for (std::uint32_t i = 0; i < b.lane_count; ++i) {
        b.raw[i] = state_.front[b.sources[i]];
        stats_.source_read_requests++;
      }
      b.issued_lanes = b.lane_count;
      b.reads_pending = 0;
      partial_issue_ = false;
      return;
    }
    while (b.issued_lanes < b.lane_count) {
      const VertexId src = b.sources[b.issued_lanes];
      const std::uint32_t bank = mem_.bank_of(src);
      if (!mem_.read_space(bank)) {
        flags.issue_capacity = true;
        break;
      }
      mem_.push_read(src, BankedMemory<T>::ReadTarget::Front,
                     (b.seq << 8) | b.issued_lanes);
      stats_.source_read_requests++;
      b.issued_lanes++;
      b.reads_pending++;
      src_reads_outstanding_++;
    }
    if (b.issued_lanes == b.lane_count) partial_issue_ = false;
  }

  void tick_schedule(CycleFlags& flags) {
    if (sched_q_.size() >= 2) return;
    if (!window_open_) {
      if (line_buf_.empty()) {
        if (next_line_ < lines_ || !dram_q_.empty()) flags.no_window = true;
        return;
      }
      cur_line_ = line_buf_.front();
      line_buf_.pop_front();
      window_open_ = true;
      window_steps_ = 0;
    }
    const EdgeIndex address = cur_line_ * cfg_.edge_lanes;
    const EdgeIndex window_end =
        std::min<EdgeIndex>(address + cfg_.edge_lanes, edges_.size());
    const ScheduleStep step = scheduler_.step(address, window_end);
    window_steps_++;
    if (window_steps_ == 2) stats_.oversubscribed_windows++;

    FlowBatch<T> b;
    b.seq = next_seq_++;
    b.line = cur_line_;
    b.last_of_line = step.window_complete;
    b.lane_count =
        static_cast<std::uint32_t>(step.consumed_end - step.consumed_begin);
    b.sources.resize(b.lane_count);
    b.dests.resize(b.lane_count);
    b.raw.assign(b.lane_count, T{});
    for (std::uint32_t i = 0; i < b.lane_count; ++i)
      b.sources[i] = edges_[step.consumed_begin + i];
    for (const ScheduledVertex& sv : step.scheduled) {
      for (EdgeIndex e = sv.first_edge; e <= sv.last_edge; ++e)
        b.dests[e - step.consumed_begin] = sv.vertex;
      b.last_lanes.push_back(
          static_cast<std::uint32_t>(sv.last_edge - step.consumed_begin));
    }
    sched_q_.push_back(std::move(b));
    if (step.window_complete) window_open_ = false;
  }

  void tick_dram() {
    if (!dram_q_.empty() && dram_q_.front().second <= cycle_) {
      line_buf_.push_back(dram_q_.front().first);
      dram_q_.pop_front();
    }
    if (next_line_ < lines_ &&
        dram_q_.size() + line_buf_.size() < cfg_.prefetch_depth) {
      dram_q_.emplace_back(next_line_, channel_.schedule_delivery(cycle_));
      next_line_++;
    }
  }

  void classify(const CycleFlags& flags) {
    if (flags.retired) {
      stats_.productive_cycles++;
    } else if (flags.accum_atomic) {
      stats_.stalls.atomic++;
    } else if (flags.route_collision || flags.accum_route) {
      stats_.stalls.crossbar++;
    } else if (flags.accum_write || flags.route_write) {
      stats_.stalls.bank_conflict++;
    } else if (flags.release_reads) {
      stats_.stalls.bank_conflict++;
    } else if (flags.issue_token) {
      stats_.stalls.reorder++;
    } else if (flags.issue_gate || flags.issue_capacity) {
      stats_.stalls.bank_conflict++;
    } else if (flags.no_window) {
      stats_.stalls.dram++;
    } else if (flags.pipeline_fill) {
      stats_.stalls.dram++;
    } else if (!mem_.idle()) {
      stats_.stalls.bank_conflict++;
    } else {
      stats_.stalls.scheduler++;
    }
  }

  std::span<const VertexId> edges_;
  VertexState<T>& state_;
  std::span<const std::uint32_t> out_deg_;
  const AlgorithmSpec<T>& spec_;
  const PipelineConfig& cfg_;
  SimStats& stats_;

  VertexScheduler scheduler_;
  DramChannel channel_;
  BankedMemory<T> mem_;
  ScanNetwork scan_;
  std::uint64_t lines_ = 0;

  std::uint64_t cycle_ = 0;

  // DRAM and line buffer
  std::uint64_t next_line_ = 0;
  std::deque<std::pair<std::uint64_t, std::uint64_t>> dram_q_;  // line, ready
  std::deque<std::uint64_t> line_buf_;

  // scheduler window
  bool window_open_ = false;
  std::uint64_t cur_line_ = 0;
  std::uint32_t window_steps_ = 0;
  std::uint64_t next_seq_ = 0;

  std::deque<FlowBatch<T>> sched_q_;
  std::deque<FlowBatch<T>> inflight_;
  std::vector<TokenSlot> token_slots_;
  bool partial_issue_ = false;
  std::uint64_t src_reads_outstanding_ = 0;

  std::optional<FlowBatch<T>> hold_;
  std::uint32_t occupancy_planned_ = 1;
  std::uint32_t drip_cursor_ = 0;

  std::vector<AccumulatedResult<T>> pending_results_;
  std::size_t route_cursor_ = 0;
  std::vector<DestAccumulator<T>> replicas_;
  std::vector<RmwEntry> rmw_;

  std::vector<TaggedValue<T>> lane_buffer_;
  std::vector<bool> replica_used_;
  std::vector<typename BankedMemory<T>::ReadDone> reads_done_;
  std::vector<typename BankedMemory<T>::WriteDone> writes_done_;
};

template <class T>
std::uint64_t PassEngine<T>::run() {
  const std::uint64_t guard =
      400 * (lines_ + 2) * std::max<std::uint64_t>(cfg_.edge_lanes, 1) + 1000000;
  while (!drained()) {
    cycle_++;
    CycleFlags flags;
    if (!cfg_.ideal_vertex_memory) {
      mem_.tick(reads_done_, writes_done_);
      process_completions();
    }
    tick_rmw();
    tick_route(flags);
    tick_accum(flags);
    tick_release(flags);
    tick_issue(flags);
    tick_schedule(flags);
    tick_dram();
    classify(flags);
    if (cycle_ > guard)
      throw std::logic_error("pipeline engine made no progress");
  }
  // Pipeline fill/flush refill; longer for the floating-point pipeline.
  const std::uint64_t drain = cfg_.pipeline_stages + spec_.extra_pipeline_stages;
  cycle_ += drain;
  stats_.stalls.dram += drain;
  stats_.bank_read_busy_cycles += mem_.read_busy_cycles();
  stats_.write_wait_cycles += mem_.write_wait_cycles();
  return cycle_;
}

}  // namespace

template <class T>
RunResult<T> run(const Graph& g, const AlgorithmSpec<T>& spec,
                 const PipelineConfig& cfg, std::uint32_t partitions) {
  cfg.validate();
  if (g.direction != DirectionMode::InEdges)
    throw std::invalid_argument("run: graph must be destination-major");
  const std::uint64_t n = g.num_vertices();
  if (n == 0) throw std::invalid_argument("run: empty graph");
  if (spec.frontier_driven && !spec.start_frontier_all && spec.root >= n)
    throw std::invalid_argument("run: root vertex out of range");

  const std::uint64_t per_part = (n + partitions - 1) / partitions;
  if (per_part * sizeof(T) > cfg.onchip_bytes) {
    throw CapacityError(
        "partition vertex data (" + std::to_string(per_part * sizeof(T)) +
        " bytes) exceeds on-chip memory (" + std::to_string(cfg.onchip_bytes) +
        " bytes); increase partitions");
  }

  const std::vector<PartData> parts = build_parts(g, cfg, partitions);
  const std::vector<std::uint32_t> out_deg = out_degrees(g);

  VertexState<T> st;
  st.double_buffered = spec.double_buffered;
  st.frontier_driven = spec.frontier_driven;
  st.front.resize(n);
  for (std::uint64_t v = 0; v < n; ++v)
    st.front[v] = spec.initial(static_cast<VertexId>(v));
  if (st.double_buffered) st.back.resize(n);
  st.cur_frontier.assign(n, 0);
  st.next_frontier.assign(n, 0);
  if (spec.frontier_driven) {
    if (spec.start_frontier_all) st.cur_frontier.assign(n, 1);
    else st.cur_frontier[spec.root] = 1;
  }

  SimStats stats;
  stats.partitions = partitions;
  stats.sub_iterations.assign(partitions, 0);

  // Streaming one partition's vertex payloads over the 64-byte line channel.
  const std::uint64_t reload_cycles =
      partitions > 1 ? (per_part * sizeof(T) + 63) / 64 : 0;

  while (true) {
    if (st.double_buffered) st.back.assign(n, spec.iteration_base);
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
      const PartData& part = parts[pi];
      if (partitions > 1) {
        // Load the part's vertex data, process its edges, store it back.
        stats.total_cycles += 2 * reload_cycles;
        stats.stalls.dram += 2 * reload_cycles;
        stats.partition_reload_cycles += 2 * reload_cycles;
      }
      PassEngine<T> engine({part.edges.data(), part.edges.size()},
                           {part.items.data(), part.items.size()}, st, out_deg,
                           spec, cfg, stats);
      stats.total_cycles += engine.run();
      stats.edges_traversed += part.edges.size();
      stats.sub_iterations[pi]++;
    }
    stats.iterations++;
    if (st.double_buffered) st.front.swap(st.back);
    if (spec.frontier_driven) {
      st.cur_frontier.swap(st.next_frontier);
      std::fill(st.next_frontier.begin(), st.next_frontier.end(), 0);
      bool any = false;
      for (std::uint8_t f : st.cur_frontier) any = any || f != 0;
      if (!any) break;
    } else if (stats.iterations >= spec.fixed_iterations) {
      break;
    }
  }

  assert(stats.productive_cycles + stats.stalls.total() == stats.total_cycles);
  if (stats.total_cycles > 0) {
    stats.teps = static_cast<double>(stats.edges_traversed) *
                 (static_cast<double>(spec.clock_mhz) * 1e6) /
                 static_cast<double>(stats.total_cycles);
  }
  return {std::move(st.front), std::move(stats)};
}

template <class T>
SimStats run_serialized_baseline(const Graph& g, const AlgorithmSpec<T>& spec,
                                 PipelineConfig cfg) {
  cfg.mode = Mode::Serialized;
  return run(g, spec, cfg).stats;
}

template <class T>
std::vector<SweepRow> ablation_sweep(const Graph& g,
                                     const AlgorithmSpec<T>& spec,
                                     const PipelineConfig& base,
                                     std::span<const Mode> modes,
                                     std::span<const std::uint32_t> pipeline_counts) {
  std::vector<SweepRow> rows;
  PipelineConfig bl = base;
  bl.mode = Mode::Baseline;
  const SimStats baseline_stats = run(g, spec, bl).stats;
  const auto speedup_vs_baseline = [&](const SimStats& s) {
    return s.total_cycles == 0
               ? 1.0
               : static_cast<double>(baseline_stats.total_cycles) /
                     static_cast<double>(s.total_cycles);
  };
  for (Mode mode : modes) {
    PipelineConfig cfg = base;
    cfg.mode = mode;
    SweepRow row;
    row.label = mode_name(mode);
    row.mode = mode;
    row.vertex_pipelines = cfg.effective_vertex_parallelism();
    row.stats = mode == Mode::Baseline ? baseline_stats : run(g, spec, cfg).stats;
    row.speedup = speedup_vs_baseline(row.stats);
    rows.push_back(std::move(row));
  }
  for (std::uint32_t n : pipeline_counts) {
    PipelineConfig cfg = base;
    cfg.mode = Mode::Cfg3;
    cfg.vertex_pipelines = n;
    cfg.ideal_vertex_memory = true;  // isolates the scheduling effect
    SweepRow row;
    row.label = "pipelines_" + std::to_string(n);
    row.mode = Mode::Cfg3;
    row.vertex_pipelines = n;
    row.stats = run(g, spec, cfg).stats;
    row.speedup = speedup_vs_baseline(row.stats);
    rows.push_back(std::move(row));
  }
  return rows;
}

template RunResult<std::uint8_t> run(const Graph&, const AlgorithmSpec<std::uint8_t>&, const PipelineConfig&, std::uint32_t);
template RunResult<std::uint32_t> run(const Graph&, const AlgorithmSpec<std::uint32_t>&, const PipelineConfig&, std::uint32_t);
template RunResult<float> run(const Graph&, const AlgorithmSpec<float>&, const PipelineConfig&, std::uint32_t);
template SimStats run_serialized_baseline(const Graph&, const AlgorithmSpec<std::uint8_t>&, PipelineConfig);
template SimStats run_serialized_baseline(const Graph&, const AlgorithmSpec<std::uint32_t>&, PipelineConfig);
template SimStats run_serialized_baseline(const Graph&, const AlgorithmSpec<float>&, PipelineConfig);
template std::vector<SweepRow> ablation_sweep(const Graph&, const AlgorithmSpec<std::uint8_t>&, const PipelineConfig&, std::span<const Mode>, std::span<const std::uint32_t>);
template std::vector<SweepRow> ablation_sweep(const Graph&, const AlgorithmSpec<std::uint32_t>&, const PipelineConfig&, std::span<const Mode>, std::span<const std::uint32_t>);
template std::vector<SweepRow> ablation_sweep(const Graph&, const AlgorithmSpec<float>&, const PipelineConfig&, std::span<const Mode>, std::span<const std::uint32_t>);

}  // namespace accumsim
