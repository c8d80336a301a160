#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "accumsim/scheduler.hpp"
#include "test_util.hpp"

using namespace accumsim;

namespace {

std::vector<VertexWorkItem> items_from_graph(const Graph& g) {
  std::vector<VertexWorkItem> items;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.degree(v) > 0) items.push_back({v, g.offsets[v], g.offsets[v + 1]});
  }
  return items;
}

}  // namespace

TEST_SUITE("scheduler") {

TEST_CASE("addresses cover all edges by ceiling division") {
  CHECK(generate_addresses(33, 16) == std::vector<EdgeIndex>{0, 16, 32});
  CHECK(generate_addresses(16, 16) == std::vector<EdgeIndex>{0});
  CHECK(generate_addresses(0, 16).empty());
}

TEST_CASE("two units schedule and pop two vertices in one cycle") {
  VertexScheduler sched({{0, 0, 3}, {1, 3, 16}}, 2);
  const auto step = sched.step(0, 16);
  REQUIRE(step.scheduled.size() == 2);
  CHECK(step.scheduled[0].vertex == 0);
  CHECK(step.scheduled[0].popped);
  CHECK(step.scheduled[1].vertex == 1);
  CHECK(step.scheduled[1].last_edge == 15);
  CHECK(step.scheduled[1].popped);
  CHECK(step.window_complete);
  CHECK(sched.exhausted());
}

TEST_CASE("one unit takes two cycles for two vertices") {
  VertexScheduler sched({{0, 0, 2}, {1, 2, 4}}, 1);
  const auto s1 = sched.step(0, 4);
  REQUIRE(s1.scheduled.size() == 1);
  CHECK(s1.scheduled[0].vertex == 0);
  CHECK(!s1.window_complete);
  const auto s2 = sched.step(0, 4);
  REQUIRE(s2.scheduled.size() == 1);
  CHECK(s2.scheduled[0].vertex == 1);
  CHECK(s2.window_complete);
}

TEST_CASE("a spanning vertex stays scheduled until its right offset") {
  VertexScheduler sched({{0, 0, 8}, {1, 8, 40}, {2, 40, 41}}, 4);
  const auto s1 = sched.step(0, 16);
  REQUIRE(s1.scheduled.size() == 2);
  CHECK(s1.scheduled[1].vertex == 1);
  CHECK(!s1.scheduled[1].popped);
  CHECK(s1.window_complete);

  const auto s2 = sched.step(16, 32);
  REQUIRE(s2.scheduled.size() == 1);
  CHECK(s2.scheduled[0].vertex == 1);
  CHECK(s2.scheduled[0].first_edge == 16);
  CHECK(s2.scheduled[0].last_edge == 31);
  CHECK(!s2.scheduled[0].popped);

  const auto s3 = sched.step(32, 41);
  REQUIRE(s3.scheduled.size() == 2);
  CHECK(s3.scheduled[0].vertex == 1);
  CHECK(s3.scheduled[0].popped);
  CHECK(s3.scheduled[1].vertex == 2);
}

TEST_CASE("every edge is consumed exactly once") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testutil::random_graph(rng, 20 + rng() % 100, 1.0 + (rng() % 8));
    const std::uint32_t units = 1 + rng() % 8;
    VertexScheduler sched(items_from_graph(g), units);
    std::vector<std::uint32_t> seen(g.num_edges(), 0);
    std::uint64_t consumed = 0;
    for (EdgeIndex addr : generate_addresses(g.num_edges(), 16)) {
      const EdgeIndex window_end = std::min<EdgeIndex>(addr + 16, g.num_edges());
      bool complete = false;
      std::uint32_t guard = 0;
      while (!complete) {
        const auto step = sched.step(addr, window_end);
        REQUIRE(step.scheduled.size() <= units);
        for (const auto& sv : step.scheduled) {
          for (EdgeIndex e = sv.first_edge; e <= sv.last_edge; ++e) seen[e]++;
          consumed += sv.last_edge - sv.first_edge + 1;
        }
        complete = step.window_complete;
        REQUIRE(++guard <= 32);
      }
    }
    CHECK(consumed == g.num_edges());
    for (auto c : seen) REQUIRE(c == 1);
    CHECK(sched.exhausted());
  }
}

TEST_CASE("scheduled vertices arrive in ascending order") {
  std::mt19937_64 rng(37);
  const Graph g = testutil::random_graph(rng, 60, 3.0);
  VertexScheduler sched(items_from_graph(g), 4);
  VertexId last = 0;
  for (EdgeIndex addr : generate_addresses(g.num_edges(), 16)) {
    const EdgeIndex window_end = std::min<EdgeIndex>(addr + 16, g.num_edges());
    bool complete = false;
    while (!complete) {
      const auto step = sched.step(addr, window_end);
      for (const auto& sv : step.scheduled) {
        CHECK(sv.vertex >= last);
        last = sv.vertex;
      }
      complete = step.window_complete;
    }
  }
}

TEST_CASE("with units >= lanes every window completes in one cycle") {
  std::mt19937_64 rng(41);
  const Graph g = testutil::random_graph(rng, 80, 2.0);
  VertexScheduler sched(items_from_graph(g), 16);
  for (EdgeIndex addr : generate_addresses(g.num_edges(), 16)) {
    const EdgeIndex window_end = std::min<EdgeIndex>(addr + 16, g.num_edges());
    const auto step = sched.step(addr, window_end);
    CHECK(step.window_complete);
  }
}

TEST_CASE("scheduler rejects malformed work item lists") {
  CHECK_THROWS_AS(VertexScheduler({{0, 0, 2}, {1, 3, 4}}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(VertexScheduler({{0, 2, 2}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(VertexScheduler({}, 0), std::invalid_argument);
}

}  // TEST_SUITE
