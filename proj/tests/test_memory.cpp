#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "accumsim/memory.hpp"

using namespace accumsim;

namespace {

RequestBatch batch_of(std::vector<VertexId> vertices, std::uint64_t arrival) {
  RequestBatch b;
  b.arrival_cycle = arrival;
  for (std::uint32_t i = 0; i < vertices.size(); ++i)
    b.requests.push_back({vertices[i], i});
  return b;
}

std::vector<RequestBatch> random_trace(std::mt19937_64& rng, std::uint32_t banks) {
  std::vector<RequestBatch> trace;
  const std::size_t count = 2 + rng() % 12;
  for (std::size_t b = 0; b < count; ++b) {
    std::vector<VertexId> vs;
    const std::size_t reqs = 1 + rng() % 16;
    for (std::size_t r = 0; r < reqs; ++r)
      vs.push_back(static_cast<VertexId>(rng() % (banks * 4)));
    trace.push_back(batch_of(vs, b));
  }
  return trace;
}

}  // namespace

TEST_SUITE("memory") {

TEST_CASE("conflict-free batch completes in one cycle") {
  const std::vector<RequestBatch> trace{batch_of({0, 1, 2, 3}, 0)};
  const auto sched = issue_batches(4, 8, trace, IssueMode::Blocking);
  CHECK(sched.cycles == 1);
}

TEST_CASE("single-bank batch fully serializes") {
  const std::vector<RequestBatch> trace{batch_of({0, 4, 8, 12}, 0)};
  const auto sched = issue_batches(4, 8, trace, IssueMode::Blocking);
  CHECK(sched.cycles == 4);
}

TEST_CASE("out-of-order lets idle banks work ahead") {
  const std::vector<RequestBatch> trace{batch_of({0, 0}, 0), batch_of({1, 2}, 0)};
  CHECK(issue_batches(4, 8, trace, IssueMode::Blocking).cycles == 3);
  CHECK(issue_batches(4, 8, trace, IssueMode::OutOfOrder).cycles == 2);
}

TEST_CASE("out-of-order never loses to blocking") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 400; ++trial) {
    const auto trace = random_trace(rng, 8);
    const auto blocking = issue_batches(8, 8, trace, IssueMode::Blocking);
    const auto ooo = issue_batches(8, 8, trace, IssueMode::OutOfOrder);
    REQUIRE(ooo.cycles <= blocking.cycles);
  }
}

TEST_CASE("every request is served exactly once") {
  std::mt19937_64 rng(73);
  const auto trace = random_trace(rng, 4);
  for (IssueMode mode : {IssueMode::Blocking, IssueMode::OutOfOrder}) {
    const auto sched = issue_batches(4, 4, trace, mode);
    std::vector<std::uint32_t> per_bank_cycle_use;
    for (std::size_t b = 0; b < trace.size(); ++b) {
      REQUIRE(sched.service_cycle[b].size() == trace[b].requests.size());
      for (std::size_t i = 0; i < trace[b].requests.size(); ++i) {
        // No two same-bank requests share a service cycle.
        for (std::size_t j = i + 1; j < trace[b].requests.size(); ++j) {
          if (trace[b].requests[i].vertex % 4 == trace[b].requests[j].vertex % 4)
            REQUIRE(sched.service_cycle[b][i] != sched.service_cycle[b][j]);
        }
      }
    }
  }
}

TEST_CASE("uniform out-of-order traffic approaches P requests per cycle") {
  std::mt19937_64 rng(79);
  const std::uint32_t banks = 8;
  std::vector<RequestBatch> trace;
  std::uint64_t total = 0;
  for (std::size_t b = 0; b < 512; ++b) {
    std::vector<VertexId> vs;
    for (int r = 0; r < 16; ++r) vs.push_back(static_cast<VertexId>(rng() % 4096));
    total += vs.size();
    trace.push_back(batch_of(vs, b / 2));  // arrive faster than service
  }
  const auto sched = issue_batches(banks, 32, trace, IssueMode::OutOfOrder);
  const double ideal = static_cast<double>(total) / banks;
  CHECK(static_cast<double>(sched.cycles) <= ideal * 1.1);
  CHECK(static_cast<double>(sched.cycles) >= ideal);
}

TEST_CASE("reorder buffer releases in request order") {
  ReorderBuffer<int> rb(4);
  REQUIRE(rb.begin_batch(0, 1));
  REQUIRE(rb.begin_batch(1, 1));
  rb.arrive(1, 0, 11);  // r1 completes first
  CHECK(!rb.try_release());
  rb.arrive(0, 0, 10);
  auto r0 = rb.try_release();
  REQUIRE(r0.has_value());
  CHECK(r0->lanes == std::vector<int>{10});
  auto r1 = rb.try_release();
  REQUIRE(r1.has_value());
  CHECK(r1->lanes == std::vector<int>{11});
}

TEST_CASE("shuffled lane arrivals come out in lane order") {
  ReorderBuffer<int> rb(2);
  REQUIRE(rb.begin_batch(1, 4));
  rb.arrive(1, 2, 22);
  rb.arrive(1, 0, 20);
  rb.arrive(1, 3, 23);
  rb.arrive(1, 1, 21);
  const auto out = rb.try_release();
  REQUIRE(out.has_value());
  CHECK(out->lanes == std::vector<int>{20, 21, 22, 23});
}

TEST_CASE("token collision with an incomplete batch stalls") {
  ReorderBuffer<int> rb(2);
  REQUIRE(rb.begin_batch(0, 2));
  CHECK(!rb.begin_batch(0, 1));  // same slot, older batch incomplete
  rb.arrive(0, 0, 1);
  rb.arrive(0, 1, 2);
  REQUIRE(rb.try_release().has_value());
  CHECK(rb.begin_batch(0, 1));
}

TEST_CASE("random arrival interleavings always release in order") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t capacity = 8;
    ReorderBuffer<std::uint64_t> rb(capacity);
    const std::size_t batches = 1 + rng() % capacity;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> arrivals;  // token, lane
    for (std::size_t b = 0; b < batches; ++b) {
      const std::uint32_t lanes = 1 + rng() % 4;
      REQUIRE(rb.begin_batch(b, lanes));
      for (std::uint32_t l = 0; l < lanes; ++l) arrivals.emplace_back(b, l);
    }
    for (std::size_t i = arrivals.size(); i > 1; --i)
      std::swap(arrivals[i - 1], arrivals[rng() % i]);
    std::uint64_t released = 0;
    for (const auto& [token, lane] : arrivals) {
      rb.arrive(token, lane, token * 100 + lane);
      while (auto out = rb.try_release()) {
        REQUIRE(out->seq == released);
        for (std::uint32_t l = 0; l < out->lanes.size(); ++l)
          REQUIRE(out->lanes[l] == out->seq * 100 + l);
        released++;
      }
    }
    CHECK(released == batches);
  }
}

TEST_CASE("token derivation uses the cacheline index") {
  CHECK(ReorderBuffer<int>::token_for_address(0, 16, 16) == 0);
  CHECK(ReorderBuffer<int>::token_for_address(16, 16, 16) == 1);
  CHECK(ReorderBuffer<int>::token_for_address(16 * 16, 16, 16) == 0);
}

TEST_CASE("dram delivers at fixed latency, one line per cycle") {
  DramChannel ch(20);
  CHECK(ch.schedule_delivery(10) == 30);
  CHECK(ch.schedule_delivery(10) == 31);
  CHECK(ch.schedule_delivery(12) == 32);
}

TEST_CASE("fetching the tail line pads invalid lanes") {
  DramChannel ch(5);
  std::vector<VertexId> edges(33);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = static_cast<VertexId>(i);
  const auto r = fetch_edges(ch, edges, 32, 16, 0);
  CHECK(r.delivery_cycle == 5);
  REQUIRE(r.batch.lanes.size() == 16);
  CHECK(r.batch.lanes[0].source == 32);
  for (std::size_t i = 1; i < 16; ++i)
    CHECK(r.batch.lanes[i].source == kInvalidVertex);
  CHECK_THROWS_AS(fetch_edges(ch, edges, 48, 16, 0), std::logic_error);
}

TEST_CASE("banked memory writes become visible the next cycle") {
  std::vector<std::uint32_t> front(8, 100);
  BankedMemory<std::uint32_t> mem(4, 8, &front, nullptr,
                                  CombineOp<std::uint32_t>::min());
  std::vector<BankedMemory<std::uint32_t>::ReadDone> reads;
  std::vector<BankedMemory<std::uint32_t>::WriteDone> writes;

  // Read and write the same bank in one cycle: both ports serve.
  mem.push_read(1, BankedMemory<std::uint32_t>::ReadTarget::Front, 7);
  mem.push_write(1, 42);
  mem.tick(reads, writes);
  REQUIRE(reads.size() == 1);
  CHECK(reads[0].value == 100);  // read sees the pre-write value
  REQUIRE(writes.size() == 1);
  CHECK(writes[0].old_value == 100);
  CHECK(writes[0].new_value == 42);

  mem.push_read(1, BankedMemory<std::uint32_t>::ReadTarget::Front, 8);
  mem.tick(reads, writes);
  REQUIRE(reads.size() == 1);
  CHECK(reads[0].value == 42);  // committed write is now visible
  CHECK(mem.idle());
}

TEST_CASE("banked memory merges writes through the combine operator") {
  std::vector<float> front(4, 0.0f);
  BankedMemory<float> mem(2, 8, &front, nullptr, CombineOp<float>::add());
  std::vector<BankedMemory<float>::ReadDone> reads;
  std::vector<BankedMemory<float>::WriteDone> writes;
  mem.push_write(2, 1.5f);
  mem.push_write(2, 2.0f);  // same bank: commits next cycle
  mem.tick(reads, writes);
  REQUIRE(writes.size() == 1);
  mem.tick(reads, writes);
  REQUIRE(writes.size() == 1);
  CHECK(front[2] == doctest::Approx(3.5f));
  CHECK(mem.write_wait_cycles() == 1);
}

}  // TEST_SUITE
