#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "accumsim/types.hpp"

namespace accumsim {

enum class CombineKind : std::uint8_t { Add, Min };

// Commutative, associative merge operator with identity. Add covers the
// atomic-add family (PageRank), Min covers the CAS-if-less family (BFS, WCC).
template <class T>
struct CombineOp {
  CombineKind kind = CombineKind::Add;
  T identity{};

  T operator()(T a, T b) const {
    return kind == CombineKind::Add ? static_cast<T>(a + b) : std::min(a, b);
  }

  static CombineOp add() { return {CombineKind::Add, T{}}; }
  static CombineOp min() {
    return {CombineKind::Min, std::numeric_limits<T>::max()};
  }
};

// One accumulator input lane: an update value bound to its destination
// vertex. Lanes at the tail of the last batch may be invalid; they carry the
// reserved tag and the operator identity.
template <class T>
struct TaggedValue {
  T value{};
  VertexId tag = kInvalidVertex;
  bool valid = false;
};

template <class T>
struct AccumulatedResult {
  VertexId tag = kInvalidVertex;
  T value{};
  std::uint32_t source_port = 0;  // lane the multiplexer selected
};

// Structural model of the minimum-depth scan network (Ladner-Fischer
// construction). Nodes at each level combine a block-boundary wire with the
// wires of the block's upper half; depth is exactly log2(width).
class ScanNetwork {
 public:
  struct Node {
    std::uint32_t left_lane;   // wire carrying the lower-half boundary value
    std::uint32_t right_lane;  // wire being updated
  };

  // Throws std::invalid_argument unless width is a power of two.
  static ScanNetwork build(std::uint32_t width);

  std::uint32_t width() const { return width_; }
  std::uint32_t depth() const { return static_cast<std::uint32_t>(levels_.size()); }
  const std::vector<std::vector<Node>>& levels() const { return levels_; }
  std::uint64_t node_count() const;

  // Number of levels at which a given lane is a node output.
  std::uint32_t lane_depth(std::uint32_t lane) const;

  // Evaluates the network with breakpoint recognition: a node whose inputs
  // carry different destination tags forwards the right input unchanged,
  // restarting the accumulation at the segment boundary. With
  // compare_tag_bits > 0 only the low bits are compared, which is checked to
  // be unambiguous for the batch. Returns one output per lane.
  template <class T>
  std::vector<T> evaluate(std::span<const TaggedValue<T>> batch,
                          const CombineOp<T>& op,
                          std::uint32_t compare_tag_bits = 0) const;

 private:
  std::uint32_t width_ = 0;
  std::vector<std::vector<Node>> levels_;
};

namespace detail {

// Equal tags must form one contiguous run and invalid lanes may only trail.
template <class T>
void check_batch_contract(std::span<const TaggedValue<T>> batch) {
  bool saw_invalid = false;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!batch[i].valid) {
      saw_invalid = true;
      continue;
    }
    if (saw_invalid)
      throw std::logic_error("accumulator: valid lane after invalid tail");
    if (i == 0 || batch[i].tag == batch[i - 1].tag) continue;
    for (std::size_t j = 0; j + 1 < i; ++j) {
      if (batch[j].tag == batch[i].tag)
        throw std::logic_error("accumulator: tag run is not contiguous");
    }
  }
}

inline VertexId masked_tag(VertexId tag, std::uint32_t bits) {
  if (bits == 0 || bits >= 32) return tag;
  return tag & ((VertexId{1} << bits) - 1);
}

}  // namespace detail

template <class T>
std::vector<T> ScanNetwork::evaluate(std::span<const TaggedValue<T>> batch,
                                     const CombineOp<T>& op,
                                     std::uint32_t compare_tag_bits) const {
  if (batch.size() != width_)
    throw std::invalid_argument("scan: batch width mismatch");
  detail::check_batch_contract(batch);
  if (compare_tag_bits > 0) {
    // Compressed comparison is only sound when no two distinct tags in the
    // batch collide on the low bits.
    for (std::size_t i = 0; i < batch.size(); ++i) {
      for (std::size_t j = i + 1; j < batch.size(); ++j) {
        if (!batch[i].valid || !batch[j].valid) continue;
        if (batch[i].tag != batch[j].tag &&
            detail::masked_tag(batch[i].tag, compare_tag_bits) ==
                detail::masked_tag(batch[j].tag, compare_tag_bits)) {
          throw std::logic_error("scan: compressed tags are ambiguous");
        }
      }
    }
  }

  std::vector<T> value(width_);
  std::vector<VertexId> tag(width_);
  for (std::uint32_t i = 0; i < width_; ++i) {
    value[i] = batch[i].valid ? batch[i].value : op.identity;
    tag[i] = detail::masked_tag(batch[i].tag, compare_tag_bits);
  }
  // Wire tags never change: a node always forwards its right input's tag.
  for (const auto& level : levels_) {
    for (const Node& node : level) {
      if (tag[node.left_lane] == tag[node.right_lane]) {
        value[node.right_lane] = op(value[node.left_lane], value[node.right_lane]);
      }
    }
  }
  return value;
}

// Segmented scan of one batch through the structural network: output[i]
// restarts at every lane whose tag differs from its predecessor's.
template <class T>
std::vector<T> segmented_scan(std::span<const TaggedValue<T>> batch,
                              const CombineOp<T>& op) {
  const auto net = ScanNetwork::build(static_cast<std::uint32_t>(batch.size()));
  return net.evaluate(batch, op);
}

// Multiplexer: picks, for each scheduled vertex, the scanned value at the
// lane of its last edge in the batch.
template <class T>
std::vector<AccumulatedResult<T>> select_results(
    std::span<const T> scanned, std::span<const TaggedValue<T>> batch,
    std::span<const std::uint32_t> last_lanes) {
  std::vector<AccumulatedResult<T>> results;
  results.reserve(last_lanes.size());
  for (std::uint32_t lane : last_lanes) {
    results.push_back({batch[lane].tag, scanned[lane], lane});
  }
  return results;
}

template <class T>
struct CrossbarRouting {
  // per replica, in arrival order
  std::vector<std::vector<AccumulatedResult<T>>> per_replica;
  std::uint64_t collisions = 0;
};

// Routes results to replica (tag mod m). Two results of one batch landing on
// the same replica count as a collision; the simulator serializes them one
// per cycle.
template <class T>
CrossbarRouting<T> route_crossbar(
    std::span<const AccumulatedResult<T>> results, std::uint32_t replicas) {
  if (replicas == 0 || (replicas & (replicas - 1)) != 0)
    throw std::invalid_argument("crossbar: replica count must be a power of two");
  CrossbarRouting<T> routing;
  routing.per_replica.resize(replicas);
  for (const auto& r : results) {
    auto& bucket = routing.per_replica[r.tag % replicas];
    if (!bucket.empty()) routing.collisions++;
    bucket.push_back(r);
  }
  return routing;
}

// One destination vertex accumulator replica: merges consecutive results of
// the same vertex in a private register and emits the held pair as a
// write-back when a different vertex arrives.
template <class T>
class DestAccumulator {
 public:
  using WriteBack = std::pair<VertexId, T>;

  std::optional<WriteBack> feed(const AccumulatedResult<T>& in,
                                const CombineOp<T>& op) {
    if (held_ && held_->first == in.tag) {
      held_->second = op(held_->second, in.value);
      return std::nullopt;
    }
    auto emitted = held_;
    held_ = WriteBack{in.tag, in.value};
    return emitted;
  }

  std::optional<WriteBack> flush() {
    auto emitted = held_;
    held_.reset();
    return emitted;
  }

  const std::optional<WriteBack>& held() const { return held_; }

 private:
  std::optional<WriteBack> held_;
};

}  // namespace accumsim
