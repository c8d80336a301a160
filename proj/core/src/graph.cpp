#include "accumsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace accumsim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

// 64-bit Lehmer-style scaling keeps the generator independent of the
// standard library's distribution implementations.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace

void Graph::validate() const {
  if (offsets.empty()) throw std::logic_error("graph: missing offsets array");
  if (offsets.front() != 0) throw std::logic_error("graph: offsets[0] != 0");
  if (offsets.back() != num_edges())
    throw std::logic_error("graph: offsets[n] != num_edges");
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] < offsets[i - 1])
      throw std::logic_error("graph: offsets not monotone");
  }
  const auto n = num_vertices();
  for (VertexId u : neighbors) {
    if (u >= n) throw std::logic_error("graph: neighbor ID out of range");
  }
}

Graph build_from_edges(std::uint64_t num_vertices,
                       const std::vector<std::pair<VertexId, VertexId>>& edges,
                       DirectionMode direction) {
  Graph g;
  g.direction = direction;
  g.offsets.assign(num_vertices + 1, 0);
  // Keyed vertex: the endpoint the adjacency is grouped by.
  const bool key_is_dst = direction == DirectionMode::InEdges;
  for (const auto& [src, dst] : edges) {
    const VertexId key = key_is_dst ? dst : src;
    g.offsets[key + 1]++;
  }
  for (std::size_t i = 1; i < g.offsets.size(); ++i) g.offsets[i] += g.offsets[i - 1];
  g.neighbors.resize(edges.size());
  std::vector<EdgeIndex> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& [src, dst] : edges) {
    const VertexId key = key_is_dst ? dst : src;
    const VertexId other = key_is_dst ? src : dst;
    g.neighbors[cursor[key]++] = other;
  }
  return g;
}

Graph load_edge_list(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) fail("cannot open edge list: " + path);

  std::vector<std::pair<VertexId, VertexId>> edges;
  std::unordered_map<std::uint64_t, VertexId> compact;
  VertexId next_id = 0;
  auto intern = [&](std::uint64_t raw) {
    auto [it, inserted] = compact.emplace(raw, next_id);
    if (inserted) ++next_id;
    return it->second;
  };

  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    std::uint64_t raw_src = 0, raw_dst = 0;
    if (std::sscanf(line.c_str(), "%llu %llu",
                    reinterpret_cast<unsigned long long*>(&raw_src),
                    reinterpret_cast<unsigned long long*>(&raw_dst)) != 2) {
      fail(path + ":" + std::to_string(line_no) + ": malformed edge line: '" +
           line + "'");
    }
    const VertexId s = intern(raw_src);
    const VertexId d = intern(raw_dst);
    edges.emplace_back(s, d);
    if (!directed) edges.emplace_back(d, s);
  }
  if (edges.empty()) fail(path + ": edge list contains no edges");
  return build_from_edges(next_id, edges, DirectionMode::InEdges);
}

namespace {

constexpr char kMagic[4] = {'A', 'G', 'R', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void write_le(std::ofstream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::ifstream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

}  // namespace

void save_graph_binary(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open for writing: " + path);
  out.write(kMagic, 4);
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint64_t>(out, g.num_vertices());
  write_le<std::uint64_t>(out, g.num_edges());
  write_le<std::uint8_t>(out, static_cast<std::uint8_t>(g.direction));
  for (EdgeIndex o : g.offsets) write_le<std::uint64_t>(out, o);
  for (VertexId v : g.neighbors) write_le<std::uint32_t>(out, v);
  if (!out) fail("short write: " + path);
}

Graph load_graph_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open graph file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    fail(path + ": not an AGRF graph file");
  const auto version = read_le<std::uint32_t>(in);
  if (version != kVersion)
    fail(path + ": unsupported AGRF version " + std::to_string(version));
  const auto n = read_le<std::uint64_t>(in);
  const auto m = read_le<std::uint64_t>(in);
  Graph g;
  g.direction = static_cast<DirectionMode>(read_le<std::uint8_t>(in));
  g.offsets.resize(n + 1);
  for (auto& o : g.offsets) o = read_le<std::uint64_t>(in);
  g.neighbors.resize(m);
  for (auto& v : g.neighbors) v = read_le<std::uint32_t>(in);
  if (!in) fail(path + ": truncated AGRF file");
  g.validate();
  return g;
}

Graph generate_powerlaw(std::uint64_t num_vertices, double avg_degree,
                        double skew, std::uint64_t seed) {
  if (num_vertices < 1) fail("generate_powerlaw: num_vertices must be >= 1");
  if (avg_degree <= 0.0) fail("generate_powerlaw: avg_degree must be > 0");
  const double requested = avg_degree * static_cast<double>(num_vertices);
  const auto num_edges = static_cast<std::uint64_t>(requested + 0.5);
  if (static_cast<double>(num_edges) >
      static_cast<double>(num_vertices) * static_cast<double>(num_vertices)) {
    fail("generate_powerlaw: requested edges exceed num_vertices^2");
  }

  std::mt19937_64 rng(seed);

  // Zipf-like in-degree weights assigned to a shuffled vertex order so hubs
  // are not clustered at low IDs (banking uses low-order ID bits).
  std::vector<VertexId> perm(num_vertices);
  for (std::uint64_t i = 0; i < num_vertices; ++i) perm[i] = static_cast<VertexId>(i);
  for (std::uint64_t i = num_vertices; i > 1; --i) {
    std::swap(perm[i - 1], perm[bounded_uniform(rng, i)]);
  }
  std::vector<double> cdf(num_vertices);
  double total = 0.0;
  for (std::uint64_t i = 0; i < num_vertices; ++i) {
    total += std::pow(static_cast<double>(i + 1), -skew);
    cdf[i] = total;
  }

  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(num_edges);
  for (std::uint64_t e = 0; e < num_edges; ++e) {
    const double r = unit_uniform(rng) * total;
    const auto rank = static_cast<std::uint64_t>(
        std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
    const VertexId dst = perm[std::min(rank, num_vertices - 1)];
    const VertexId src =
        static_cast<VertexId>(bounded_uniform(rng, num_vertices));
    edges.emplace_back(src, dst);
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return build_from_edges(num_vertices, edges, DirectionMode::InEdges);
}

Graph reverse(const Graph& g) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(g.num_edges());
  const bool in_edges = g.direction == DirectionMode::InEdges;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (VertexId u : g.neighbors_of(v)) {
      if (in_edges) {
        edges.emplace_back(u, v);
      } else {
        edges.emplace_back(v, u);
      }
    }
  }
  const DirectionMode flipped = in_edges ? DirectionMode::OutEdges : DirectionMode::InEdges;
  return build_from_edges(g.num_vertices(), edges, flipped);
}

Graph symmetrize(const Graph& g) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(2 * g.num_edges());
  const bool in_edges = g.direction == DirectionMode::InEdges;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (VertexId u : g.neighbors_of(v)) {
      const VertexId src = in_edges ? u : v;
      const VertexId dst = in_edges ? v : u;
      edges.emplace_back(src, dst);
      edges.emplace_back(dst, src);
    }
  }
  return build_from_edges(g.num_vertices(), edges, DirectionMode::InEdges);
}

std::vector<std::uint32_t> out_degrees(const Graph& g) {
  std::vector<std::uint32_t> deg(g.num_vertices(), 0);
  if (g.direction == DirectionMode::InEdges) {
    for (VertexId u : g.neighbors) deg[u]++;
  } else {
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      deg[v] = static_cast<std::uint32_t>(g.degree(v));
  }
  return deg;
}

double DegreeProfile::covered_edge_fraction(std::uint64_t min_degree) const {
  if (num_edges == 0) return min_degree == 0 ? 1.0 : 0.0;
  std::uint64_t covered = 0;
  for (const auto& [deg, count] : histogram) {
    if (deg >= min_degree) covered += deg * count;
  }
  return static_cast<double>(covered) / static_cast<double>(num_edges);
}

DegreeProfile degree_profile(const Graph& g) {
  DegreeProfile p;
  p.num_edges = g.num_edges();
  for (VertexId v = 0; v < g.num_vertices(); ++v) p.histogram[g.degree(v)]++;
  p.average_degree = g.num_vertices() == 0
                         ? 0.0
                         : static_cast<double>(g.num_edges()) /
                               static_cast<double>(g.num_vertices());
  return p;
}

}  // namespace accumsim
