#include <doctest.h>

#include "aoikit/errors.hpp"
#include "aoikit/policies.hpp"
#include "aoikit/rng.hpp"

using namespace aoikit;

namespace {

using Bytes = std::vector<std::uint8_t>;
using Times = std::vector<double>;

Workload trace_a() { return make_workload({1.0, 2.0, 3.5}, {0.5, 2.0, 1.0}); }
Workload trace_b() { return make_workload({0.0, 1.0, 2.0, 3.2}, {2.5, 0.5, 1.0, 1.0}); }

void check_times(const Times& got, const Times& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-15));
}

}  // namespace

TEST_CASE("pushout hand trace") {
  OutcomeSeq o = simulate(PolicyKind::pushout(), trace_a());
  CHECK(o.psi == Bytes{1, 0, 1});
  CHECK(o.chi == Bytes{1, 1, 1});
  check_times(o.depart, {1.5, 3.5, 4.5});
}

TEST_CASE("blocking hand traces") {
  // message 1 is done at 1.5, so message 2 finds the server idle and message 3 is rejected
  OutcomeSeq o = simulate(PolicyKind::blocking(), trace_a());
  CHECK(o.chi == Bytes{1, 1, 0});
  CHECK(o.psi == Bytes{1, 1, 0});
  check_times(o.depart, {1.5, 4.0, 3.5});
  OutcomeSeq b = simulate(PolicyKind::blocking(), make_workload({1.0, 2.0, 3.5}, {1.5, 2.0, 1.0}));
  CHECK(b.chi == Bytes{1, 0, 1});
  CHECK(b.psi == Bytes{1, 0, 1});
  check_times(b.depart, {2.5, 2.0, 4.5});
}

TEST_CASE("buffer-two hand traces") {
  OutcomeSeq a = simulate(PolicyKind::pushout_two(), trace_a());
  CHECK(a.psi == Bytes{1, 1, 1});
  check_times(a.depart, {1.5, 4.0, 5.0});
  OutcomeSeq b = simulate(PolicyKind::pushout_two(), trace_b());
  CHECK(b.psi == Bytes{1, 0, 1, 1});
  check_times(b.depart, {2.5, 2.0, 3.5, 4.5});
}

TEST_CASE("fifo and preemptive LIFO hand traces") {
  OutcomeSeq f = simulate(PolicyKind::fifo(), trace_b());
  CHECK(f.psi == Bytes{1, 1, 1, 1});
  check_times(f.depart, {2.5, 3.0, 4.0, 5.0});
  OutcomeSeq l = simulate(PolicyKind::preemptive_lifo(), trace_b());
  CHECK(l.psi == Bytes{1, 1, 1, 1});
  check_times(l.depart, {5.0, 1.5, 3.0, 4.2});
}

TEST_CASE("block-then-push and push-then-block hand traces") {
  OutcomeSeq bp = simulate(PolicyKind::block_then_push(1), trace_b());
  CHECK(bp.psi == Bytes{0, 0, 1, 1});
  CHECK(bp.chi == Bytes{1, 0, 1, 1});
  check_times(bp.depart, {2.0, 1.0, 3.0, 4.2});
  OutcomeSeq pb = simulate(PolicyKind::push_then_block(1), trace_b());
  CHECK(pb.psi == Bytes{0, 1, 1, 1});
  check_times(pb.depart, {1.0, 1.5, 3.0, 4.2});
}

TEST_CASE("degenerate thresholds reproduce the bufferless policies") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Workload w = generate_workload(Dist::exponential(1.0), Dist::exponential(0.8), 2000, s);
    CHECK(simulate(PolicyKind::block_then_push(0), w) == simulate(PolicyKind::pushout(), w));
    CHECK(simulate(PolicyKind::push_then_block(0), w) == simulate(PolicyKind::blocking(), w));
  }
}

TEST_CASE("outcome invariants") {
  Workload w = generate_workload(Dist::exponential(1.3), Dist::uniform(0.2, 1.2), 5000, 21);
  for (const PolicyKind& p : {PolicyKind::pushout(), PolicyKind::blocking(), PolicyKind::block_then_push(2),
                              PolicyKind::push_then_block(2), PolicyKind::pushout_two(), PolicyKind::fifo(),
                              PolicyKind::preemptive_lifo()}) {
    OutcomeSeq o = simulate(p, w);
    REQUIRE(o.depart.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(o.depart[i] >= w.arrivals[i]);
      if (o.psi[i]) CHECK(o.depart[i] >= w.arrivals[i] + w.services[i] * (1 - 1e-12));
      if (!o.chi[i]) CHECK(o.depart[i] == w.arrivals[i]);
    }
  }
}

TEST_CASE("fifo instability flag") {
  Workload heavy = generate_workload(Dist::exponential(1.5), Dist::exponential(1.0), 10000, 2);
  CHECK(simulate(PolicyKind::fifo(), heavy).instability_warning);
  Workload light = generate_workload(Dist::exponential(0.5), Dist::exponential(1.0), 10000, 2);
  CHECK_FALSE(simulate(PolicyKind::fifo(), light).instability_warning);
}

TEST_CASE("policy names round-trip") {
  for (const PolicyKind& p : {PolicyKind::pushout(), PolicyKind::blocking(), PolicyKind::block_then_push(3),
                              PolicyKind::push_then_block(0), PolicyKind::pushout_two(), PolicyKind::fifo(),
                              PolicyKind::preemptive_lifo()}) {
    CHECK(parse_policy(p.name()) == p);
  }
  CHECK_THROWS_AS(parse_policy("lifo"), InvalidSpec);
  CHECK_THROWS_AS(parse_policy("bp:-1"), InvalidSpec);
  CHECK_THROWS_AS(parse_policy("bp:x"), InvalidSpec);
}
