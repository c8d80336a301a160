#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "accumsim/accumulator.hpp"
#include "accumsim/graph.hpp"
#include "accumsim/types.hpp"

namespace accumsim {

// Immutable descriptor of a vertex program. The per-vertex update is always
// the combine operator merged into the stored state with change detection
// (CAS-if-less for Min, accumulate for Add); what varies per algorithm is
// the payload, the scatter function, the iteration mode and the state
// initialization.
template <class T>
struct AlgorithmSpec {
  std::string name;
  CombineOp<T> combine;

  // Frontier-driven programs gate scatter on last iteration's changed set
  // and run to an empty frontier; all-active programs scatter from every
  // vertex for a fixed iteration count.
  bool frontier_driven = true;
  bool start_frontier_all = false;
  std::uint32_t fixed_iterations = 0;
  VertexId root = 0;

  // Double-buffered state: scatter reads last iteration's values while
  // updates land in a fresh array initialized to iteration_base.
  bool double_buffered = false;
  T iteration_base{};

  double epsilon = 0.0;  // reporting only

  std::function<T(VertexId)> initial;
  std::function<T(T state, std::uint32_t out_degree)> scatter;

  // Reporting conventions.
  std::uint32_t clock_mhz = 250;
  std::uint32_t extra_pipeline_stages = 0;
};

using BfsSpec = AlgorithmSpec<std::uint8_t>;
using PageRankSpec = AlgorithmSpec<float>;
using WccSpec = AlgorithmSpec<std::uint32_t>;

// BFS: 1-byte depth, unreached sentinel 255, CAS-if-less with dis[u]+1.
inline BfsSpec bfs_spec(VertexId root) {
  BfsSpec spec;
  spec.name = "bfs";
  spec.combine = CombineOp<std::uint8_t>::min();
  spec.frontier_driven = true;
  spec.root = root;
  spec.initial = [root](VertexId v) -> std::uint8_t {
    return v == root ? std::uint8_t{0} : std::uint8_t{255};
  };
  spec.scatter = [](std::uint8_t dis, std::uint32_t) -> std::uint8_t {
    return static_cast<std::uint8_t>(dis + 1);
  };
  return spec;
}

// PageRank: rank(v) = epsilon + sum over in-neighbors u of
// rank(u) / out_degree(u), evaluated against last iteration's ranks for a
// fixed iteration count. Vertices without out-edges contribute nothing.
inline PageRankSpec pagerank_spec(double epsilon, std::uint32_t iterations) {
  if (iterations < 1)
    throw std::invalid_argument("pagerank: iterations must be >= 1");
  PageRankSpec spec;
  spec.name = "pr";
  spec.combine = CombineOp<float>::add();
  spec.frontier_driven = false;
  spec.fixed_iterations = iterations;
  spec.double_buffered = true;
  spec.iteration_base = static_cast<float>(epsilon);
  spec.epsilon = epsilon;
  spec.initial = [](VertexId) -> float { return 1.0f; };
  spec.scatter = [](float rank, std::uint32_t out_degree) -> float {
    return rank / static_cast<float>(out_degree);
  };
  spec.clock_mhz = 200;
  spec.extra_pipeline_stages = 4;  // floating point lengthens the pipeline
  return spec;
}

// WCC: label propagation to the component minimum, run on a symmetrized
// edge set.
inline WccSpec wcc_spec() {
  WccSpec spec;
  spec.name = "wcc";
  spec.combine = CombineOp<std::uint32_t>::min();
  spec.frontier_driven = true;
  spec.start_frontier_all = true;
  spec.initial = [](VertexId v) -> std::uint32_t { return v; };
  spec.scatter = [](std::uint32_t label, std::uint32_t) -> std::uint32_t {
    return label;
  };
  return spec;
}

template <class T>
struct SerialResult {
  std::vector<T> states;
  std::uint64_t iterations = 0;
};

// Ground-truth executor: strictly sequential edge-at-a-time updates in edge
// order (destination-major), with the same gating, buffering and
// termination rules the pipeline implements.
template <class T>
SerialResult<T> serial_reference(const AlgorithmSpec<T>& spec, const Graph& g) {
  if (g.direction != DirectionMode::InEdges)
    throw std::invalid_argument("serial_reference: graph must be destination-major");
  const std::uint64_t n = g.num_vertices();
  if (spec.frontier_driven && !spec.start_frontier_all && spec.root >= n)
    throw std::invalid_argument("serial_reference: root out of range");

  const std::vector<std::uint32_t> out_deg = out_degrees(g);
  std::vector<T> front(n);
  for (std::uint64_t v = 0; v < n; ++v)
    front[v] = spec.initial(static_cast<VertexId>(v));
  std::vector<T> back;
  if (spec.double_buffered) back.resize(n);

  std::vector<std::uint8_t> cur(n, 0), next(n, 0);
  if (spec.frontier_driven) {
    if (spec.start_frontier_all) cur.assign(n, 1);
    else cur[spec.root] = 1;
  }

  std::uint64_t iterations = 0;
  while (true) {
    if (spec.double_buffered) back.assign(n, spec.iteration_base);
    std::vector<T>& target = spec.double_buffered ? back : front;
    bool changed_any = false;
    for (VertexId v = 0; v < n; ++v) {
      for (VertexId u : g.neighbors_of(v)) {
        if (spec.frontier_driven && !cur[u]) continue;
        const T update = spec.scatter(front[u], out_deg[u]);
        const T merged = spec.combine(target[v], update);
        if (merged != target[v]) {
          target[v] = merged;
          next[v] = 1;
          changed_any = true;
        }
      }
    }
    iterations++;
    if (spec.double_buffered) front.swap(back);
    if (spec.frontier_driven) {
      cur.swap(next);
      next.assign(n, 0);
      if (!changed_any) break;
    } else if (iterations >= spec.fixed_iterations) {
      break;
    }
  }
  return {std::move(front), iterations};
}

}  // namespace accumsim
