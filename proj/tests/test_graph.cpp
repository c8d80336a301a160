#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "accumsim/graph.hpp"
#include "test_util.hpp"

using namespace accumsim;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("directed edge list loads as in-edge graph") {
  const auto path = write_temp("accumsim_g1.txt", "0 1\n1 2\n");
  const Graph g = load_edge_list(path, true);
  CHECK(g.num_vertices() == 3);
  CHECK(g.num_edges() == 2);
  REQUIRE(g.degree(1) == 1);
  CHECK(g.neighbors_of(1)[0] == 0);
  REQUIRE(g.degree(2) == 1);
  CHECK(g.neighbors_of(2)[0] == 1);
  g.validate();
}

TEST_CASE("undirected loading doubles every edge") {
  const auto path = write_temp("accumsim_g2.txt", "0 1\n");
  const Graph g = load_edge_list(path, false);
  CHECK(g.num_edges() == 2);
  REQUIRE(g.degree(0) == 1);
  CHECK(g.neighbors_of(0)[0] == 1);
  REQUIRE(g.degree(1) == 1);
  CHECK(g.neighbors_of(1)[0] == 0);
}

TEST_CASE("vertex IDs compact in order of first appearance") {
  const auto path = write_temp("accumsim_g3.txt", "# c\n5 7\n");
  const Graph g = load_edge_list(path, true);
  CHECK(g.num_vertices() == 2);
  CHECK(g.num_edges() == 1);
  REQUIRE(g.degree(1) == 1);
  CHECK(g.neighbors_of(1)[0] == 0);  // 5 -> 0, 7 -> 1
}

TEST_CASE("per-vertex neighbor order equals file order") {
  const auto path = write_temp("accumsim_g4.txt", "3 9\n5 9\n4 9\n");
  const Graph g = load_edge_list(path, true);
  REQUIRE(g.degree(1) == 3);  // 9 compacted to id 1
  CHECK(g.neighbors_of(1)[0] == 0);
  CHECK(g.neighbors_of(1)[1] == 2);
  CHECK(g.neighbors_of(1)[2] == 3);
}

TEST_CASE("malformed line reports its number") {
  const auto path = write_temp("accumsim_g5.txt", "0 1\nnot an edge\n");
  CHECK_THROWS_WITH_AS(load_edge_list(path, true),
                       doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("file without edges is rejected") {
  const auto path = write_temp("accumsim_g6.txt", "# only comments\n");
  CHECK_THROWS_AS(load_edge_list(path, true), std::runtime_error);
}

TEST_CASE("binary round-trip is bit identical") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = testutil::random_graph(rng, 1 + rng() % 60, 1.0 + (rng() % 5));
    const auto path =
        (std::filesystem::temp_directory_path() / "accumsim_rt.agrf").string();
    save_graph_binary(g, path);
    const Graph back = load_graph_binary(path);
    CHECK(back == g);
  }
}

TEST_CASE("binary loader rejects foreign files") {
  const auto path = write_temp("accumsim_bad.agrf", "not a graph");
  CHECK_THROWS_AS(load_graph_binary(path), std::runtime_error);
}

TEST_CASE("degree sum equals edge count") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testutil::random_graph(rng, 2 + rng() % 100, 0.5 + (rng() % 8));
    std::uint64_t total = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) total += g.degree(v);
    CHECK(total == g.num_edges());
  }
}

TEST_CASE("power-law generator is deterministic") {
  const Graph a = generate_powerlaw(1000, 16.0, 2.0, 42);
  const Graph b = generate_powerlaw(1000, 16.0, 2.0, 42);
  CHECK(a == b);
  const Graph c = generate_powerlaw(1000, 16.0, 2.0, 43);
  CHECK(c != a);
}

TEST_CASE("generator hits the requested average degree") {
  const Graph g = generate_powerlaw(10, 0.5, 2.0, 1);
  const double realized =
      static_cast<double>(g.num_edges()) / static_cast<double>(g.num_vertices());
  CHECK(realized / 0.5 >= 0.9);
  CHECK(realized / 0.5 <= 1.1);
}

TEST_CASE("generator rejects degenerate input") {
  CHECK_THROWS_AS(generate_powerlaw(1, 0.0, 2.0, 1), std::runtime_error);
  CHECK_THROWS_AS(generate_powerlaw(2, 5.0, 2.0, 1), std::runtime_error);
}

TEST_CASE("generator skews in-degrees") {
  const Graph g = generate_powerlaw(4096, 8.0, 2.0, 3);
  const DegreeProfile p = degree_profile(g);
  // A heavy tail: the top-degree decile of edges sits on few vertices.
  CHECK(p.covered_edge_fraction(64) > 0.1);
  CHECK(p.covered_edge_fraction(0) == doctest::Approx(1.0));
}

TEST_CASE("degree profile of a star") {
  const Graph g = build_from_edges(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});
  const DegreeProfile p = degree_profile(g);
  CHECK(p.covered_edge_fraction(4) == doctest::Approx(1.0));
  CHECK(p.histogram.at(4) == 1);
  CHECK(p.histogram.at(0) == 4);
}

TEST_CASE("degree profile of a 2-cycle") {
  const Graph g = build_from_edges(2, {{0, 1}, {1, 0}});
  const DegreeProfile p = degree_profile(g);
  CHECK(p.histogram.size() == 1);
  CHECK(p.histogram.at(1) == 2);
  CHECK(p.average_degree == doctest::Approx(1.0));
}

TEST_CASE("covered fraction matches a brute-force recount") {
  const Graph g = generate_powerlaw(500, 6.0, 1.6, 9);
  const DegreeProfile p = degree_profile(g);
  for (std::uint64_t d : {0ull, 1ull, 2ull, 5ull, 10ull, 50ull}) {
    std::uint64_t covered = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (g.degree(v) >= d) covered += g.degree(v);
    }
    const double expected =
        static_cast<double>(covered) / static_cast<double>(g.num_edges());
    CHECK(p.covered_edge_fraction(d) == doctest::Approx(expected));
    if (d > 0) CHECK(p.covered_edge_fraction(d) <= p.covered_edge_fraction(d - 1));
  }
}

TEST_CASE("reverse flips orientation and symmetrize doubles") {
  const Graph g = build_from_edges(3, {{0, 1}, {1, 2}});
  const Graph r = reverse(g);
  CHECK(r.direction == DirectionMode::OutEdges);
  REQUIRE(r.degree(0) == 1);
  CHECK(r.neighbors_of(0)[0] == 1);
  const Graph s = symmetrize(g);
  CHECK(s.num_edges() == 4);
  CHECK(s.degree(0) == 1);
  CHECK(s.degree(1) == 2);
}

TEST_CASE("out degrees count source occurrences") {
  const Graph g = build_from_edges(4, {{0, 1}, {0, 2}, {3, 2}});
  const auto deg = out_degrees(g);
  CHECK(deg[0] == 2);
  CHECK(deg[3] == 1);
  CHECK(deg[1] == 0);
}

}  // TEST_SUITE
