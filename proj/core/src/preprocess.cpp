#include "accumsim/preprocess.hpp"

#include <algorithm>
#include <stdexcept>

namespace accumsim {

namespace {

bool is_pow2(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

Graph rearrange_edges(const Graph& g, const RearrangeConfig& cfg) {
  const std::uint32_t P = cfg.partition_count;
  if (!is_pow2(P)) throw std::invalid_argument("rearrange: P must be a power of two");

  Graph out = g;
  std::vector<std::vector<VertexId>> queues(P);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto list = g.neighbors_of(v);
    if (list.size() <= 1) continue;
    for (auto& q : queues) q.clear();
    for (VertexId u : list) queues[u % P].push_back(u);

    EdgeIndex write = g.offsets[v];
    std::vector<std::size_t> head(P, 0);
    std::uint64_t remaining = list.size();
    std::uint32_t i = 0;
    while (remaining > 0) {
      while (head[i] >= queues[i].size()) i = (i + 1) % P;
      out.neighbors[write++] = queues[i][head[i]++];
      --remaining;
      i = (i + 1) % P;
    }
  }
  return out;
}

std::vector<GraphPartition> partition_by_destination(const Graph& g,
                                                     std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("partition: k must be >= 1");
  const std::uint64_t n = g.num_vertices();
  if (k > n) throw std::invalid_argument("partition: k exceeds vertex count");

  std::vector<GraphPartition> parts(k);
  const std::uint64_t base = n / k;
  const std::uint64_t extra = n % k;
  VertexId begin = 0;
  for (std::uint32_t p = 0; p < k; ++p) {
    const auto size = base + (p < extra ? 1 : 0);
    const auto end = static_cast<VertexId>(begin + size);
    GraphPartition& part = parts[p];
    part.part_index = p;
    part.begin_vertex = begin;
    part.end_vertex = end;

    Graph& sub = part.sub_graph;
    sub.direction = g.direction;
    sub.offsets.assign(n + 1, 0);
    for (VertexId v = begin; v < end; ++v)
      sub.offsets[v + 1] = g.degree(v);
    for (std::uint64_t v = 1; v <= n; ++v) sub.offsets[v] += sub.offsets[v - 1];
    sub.neighbors.resize(sub.offsets.back());
    for (VertexId v = begin; v < end; ++v) {
      const auto list = g.neighbors_of(v);
      std::copy(list.begin(), list.end(), sub.neighbors.begin() + sub.offsets[v]);
    }
    begin = end;
  }
  return parts;
}

double BankConflictProfile::mean_max_per_bank() const {
  if (windows == 0) return 0.0;
  std::uint64_t total = 0;
  for (const auto& [max_per_bank, count] : histogram)
    total += static_cast<std::uint64_t>(max_per_bank) * count;
  return static_cast<double>(total) / static_cast<double>(windows);
}

BankConflictProfile bank_conflict_profile(const Graph& g, std::uint32_t banks,
                                          std::uint32_t batch_width) {
  if (batch_width == 0)
    throw std::invalid_argument("bank_conflict_profile: batch_width must be >= 1");
  BankConflictProfile profile;
  std::vector<std::uint32_t> per_bank(banks, 0);
  const auto& edges = g.neighbors;
  for (std::size_t base = 0; base < edges.size(); base += batch_width) {
    std::fill(per_bank.begin(), per_bank.end(), 0);
    const std::size_t end = std::min(edges.size(), base + batch_width);
    std::uint32_t max_per_bank = 0;
    for (std::size_t i = base; i < end; ++i) {
      max_per_bank = std::max(max_per_bank, ++per_bank[edges[i] % banks]);
    }
    profile.histogram[max_per_bank]++;
    profile.windows++;
  }
  return profile;
}

}  // namespace accumsim
