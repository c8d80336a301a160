#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "accumsim/types.hpp"

namespace accumsim {

// Immutable compressed adjacency. Destination-major (InEdges) is the primary
// orientation: neighbors_of(v) are the sources of edges into v, in insertion
// order. offsets has num_vertices()+1 entries with offsets[0] == 0 and
// offsets[n] == num_edges().
struct Graph {
  std::vector<EdgeIndex> offsets;
  std::vector<VertexId> neighbors;
  DirectionMode direction = DirectionMode::InEdges;

  std::uint64_t num_vertices() const {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
  std::uint64_t num_edges() const { return neighbors.size(); }

  std::uint64_t degree(VertexId v) const {
    return offsets[v + 1] - offsets[v];
  }
  std::span<const VertexId> neighbors_of(VertexId v) const {
    return {neighbors.data() + offsets[v], degree(v)};
  }

  // Throws std::logic_error if the offset/neighbor invariants are broken.
  void validate() const;

  bool operator==(const Graph&) const = default;
};

// Builds a graph from (src, dst) pairs. For InEdges the per-vertex neighbor
// order equals the order the edges appear in `edges`.
Graph build_from_edges(std::uint64_t num_vertices,
                       const std::vector<std::pair<VertexId, VertexId>>& edges,
                       DirectionMode direction = DirectionMode::InEdges);

// Parses a SNAP-style text edge list: "src dst" integer pairs, one per line,
// '#' starts a comment line. Vertex IDs are compacted to 0..n-1 in order of
// first appearance. With directed=false every edge is inserted both ways.
// Throws std::runtime_error with a line number on malformed input and on an
// edge-free file.
Graph load_edge_list(const std::string& path, bool directed);

// Binary graph container: magic "AGRF", u32 version, u64 vertex and edge
// counts, u8 direction mode, u64 offsets, u32 neighbors. Little-endian.
void save_graph_binary(const Graph& g, const std::string& path);
Graph load_graph_binary(const std::string& path);

// Deterministic synthetic generator: in-degrees follow a power law with the
// given skew exponent, sources are uniform. Self-loops and duplicate edges
// may occur and are retained.
Graph generate_powerlaw(std::uint64_t num_vertices, double avg_degree,
                        double skew, std::uint64_t seed);

// Flips orientation: the returned graph lists the opposite endpoints.
Graph reverse(const Graph& g);

// Union of g and reverse(g): every edge present in both directions.
Graph symmetrize(const Graph& g);

// Per-source edge counts (out-degrees) of a destination-major graph.
std::vector<std::uint32_t> out_degrees(const Graph& g);

struct DegreeProfile {
  std::map<std::uint64_t, std::uint64_t> histogram;  // degree -> vertex count
  double average_degree = 0.0;
  std::uint64_t num_edges = 0;

  // Fraction of edges incident to vertices of degree >= d.
  double covered_edge_fraction(std::uint64_t min_degree) const;
};

DegreeProfile degree_profile(const Graph& g);

}  // namespace accumsim
