#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "accumsim/algorithms.hpp"
#include "accumsim/graph.hpp"
#include "test_util.hpp"

using namespace accumsim;

namespace {

// Textbook queue BFS on the out-edge view; the independent distance oracle.
std::vector<std::uint8_t> queue_bfs(const Graph& g, VertexId root) {
  const Graph out = reverse(g);  // g is destination-major
  std::vector<std::uint8_t> dis(g.num_vertices(), 255);
  dis[root] = 0;
  std::queue<VertexId> q;
  q.push(root);
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    if (dis[u] == 254) continue;  // saturation: deeper levels stay unreached
    for (VertexId v : out.neighbors_of(u)) {
      if (dis[v] == 255) {
        dis[v] = static_cast<std::uint8_t>(dis[u] + 1);
        q.push(v);
      }
    }
  }
  return dis;
}

struct UnionFind {
  std::vector<VertexId> parent;
  explicit UnionFind(std::uint64_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  VertexId find(VertexId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(VertexId a, VertexId b) { parent[find(a)] = find(b); }
};

// Component minima via union-find; the independent WCC oracle.
std::vector<std::uint32_t> component_minima(const Graph& g) {
  UnionFind uf(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (VertexId u : g.neighbors_of(v)) uf.unite(u, v);
  }
  std::vector<std::uint32_t> minimum(g.num_vertices());
  std::iota(minimum.begin(), minimum.end(), 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const VertexId r = uf.find(v);
    minimum[r] = std::min(minimum[r], v);
  }
  std::vector<std::uint32_t> labels(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) labels[v] = minimum[uf.find(v)];
  return labels;
}

// Edge-pair PageRank evaluation straight from the formula, structured
// differently from serial_reference's per-destination loop.
std::vector<float> dense_pagerank(const Graph& g, float epsilon,
                                  std::uint32_t iterations) {
  const auto out_deg = out_degrees(g);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    for (VertexId u : g.neighbors_of(v)) edges.emplace_back(u, v);
  std::vector<float> rank(g.num_vertices(), 1.0f);
  for (std::uint32_t it = 0; it < iterations; ++it) {
    std::vector<float> next(g.num_vertices(), epsilon);
    for (const auto& [u, v] : edges)
      next[v] += rank[u] / static_cast<float>(out_deg[u]);
    rank.swap(next);
  }
  return rank;
}

}  // namespace

TEST_SUITE("algorithms") {

TEST_CASE("bfs walks a path") {
  const Graph g = build_from_edges(3, {{0, 1}, {1, 2}});
  const auto result = serial_reference(bfs_spec(0), g);
  CHECK(result.states == std::vector<std::uint8_t>{0, 1, 2});
}

TEST_CASE("isolated vertices keep the sentinel") {
  const Graph g = build_from_edges(3, {{0, 1}});
  const auto result = serial_reference(bfs_spec(0), g);
  CHECK(result.states[2] == 255);
}

TEST_CASE("bfs root must exist") {
  const Graph g = build_from_edges(2, {{0, 1}});
  CHECK_THROWS_AS(serial_reference(bfs_spec(9), g), std::invalid_argument);
}

TEST_CASE("bfs equals the queue oracle on random graphs") {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint64_t n = 2 + rng() % 120;
    const Graph g = testutil::random_graph(rng, n, 0.5 + (rng() % 6));
    const VertexId root = static_cast<VertexId>(rng() % n);
    const auto result = serial_reference(bfs_spec(root), g);
    REQUIRE(result.states == queue_bfs(g, root));
  }
}

TEST_CASE("bfs distances never increase across iterations") {
  std::mt19937_64 rng(303);
  const Graph g = testutil::random_graph(rng, 80, 2.0);
  const auto spec = bfs_spec(0);
  // Re-run the reference loop with per-iteration snapshots.
  const auto out_deg = out_degrees(g);
  std::vector<std::uint8_t> dis(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) dis[v] = spec.initial(v);
  std::vector<std::uint8_t> cur(g.num_vertices(), 0), next(g.num_vertices(), 0);
  cur[0] = 1;
  bool changed = true;
  while (changed) {
    const auto before = dis;
    changed = false;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      for (VertexId u : g.neighbors_of(v)) {
        if (!cur[u]) continue;
        const auto merged = spec.combine(dis[v], spec.scatter(dis[u], out_deg[u]));
        if (merged != dis[v]) {
          dis[v] = merged;
          next[v] = 1;
          changed = true;
        }
      }
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) REQUIRE(dis[v] <= before[v]);
    cur.swap(next);
    next.assign(g.num_vertices(), 0);
  }
}

TEST_CASE("pagerank of a single vertex is epsilon") {
  Graph g;
  g.offsets = {0, 0};
  const auto result = serial_reference(pagerank_spec(0.15, 5), g);
  CHECK(result.states[0] == doctest::Approx(0.15f));
}

TEST_CASE("one iteration on a 2-cycle gives 1.15") {
  const Graph g = build_from_edges(2, {{0, 1}, {1, 0}});
  const auto result = serial_reference(pagerank_spec(0.15, 1), g);
  CHECK(result.states[0] == doctest::Approx(1.15f));
  CHECK(result.states[1] == doctest::Approx(1.15f));
}

TEST_CASE("pagerank validates the iteration count") {
  CHECK_THROWS_AS(pagerank_spec(0.15, 0), std::invalid_argument);
}

TEST_CASE("pagerank matches the dense oracle") {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint64_t n = 2 + rng() % 100;
    const Graph g = testutil::random_graph(rng, n, 0.5 + (rng() % 5));
    const std::uint32_t iters = 1 + rng() % 10;
    const auto result = serial_reference(pagerank_spec(0.15, iters), g);
    const auto expected = dense_pagerank(g, 0.15f, iters);
    for (std::uint64_t v = 0; v < n; ++v) {
      REQUIRE(result.states[v] ==
              doctest::Approx(expected[v]).epsilon(1e-6 * iters));
    }
  }
}

TEST_CASE("wcc labels two disjoint 2-cycles") {
  const Graph g = build_from_edges(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
  const auto result = serial_reference(wcc_spec(), g);
  CHECK(result.states == std::vector<std::uint32_t>{0, 0, 2, 2});
}

TEST_CASE("an isolated vertex keeps its own label") {
  Graph g;
  g.offsets = {0, 0};
  const auto result = serial_reference(wcc_spec(), g);
  CHECK(result.states[0] == 0);
}

TEST_CASE("wcc equals union-find component minima") {
  std::mt19937_64 rng(311);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g =
        symmetrize(testutil::random_graph(rng, 2 + rng() % 100, 0.4 + (rng() % 3)));
    const auto result = serial_reference(wcc_spec(), g);
    REQUIRE(result.states == component_minima(g));
  }
}

TEST_CASE("wcc fixpoint: every edge endpoint pair shares a label") {
  std::mt19937_64 rng(313);
  const Graph g = symmetrize(testutil::random_graph(rng, 90, 1.5));
  const auto result = serial_reference(wcc_spec(), g);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (VertexId u : g.neighbors_of(v))
      REQUIRE(result.states[u] == result.states[v]);
  }
}

TEST_CASE("combine ops satisfy their algebra") {
  const auto add = CombineOp<float>::add();
  CHECK(add(add.identity, 3.5f) == 3.5f);
  const auto mn = CombineOp<std::uint8_t>::min();
  CHECK(mn(mn.identity, 7) == 7);
  CHECK(mn(3, 7) == 3);
}

}  // TEST_SUITE
