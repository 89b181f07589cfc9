#include <doctest.h>

#include <set>

#include "aoikit/rng.hpp"

using namespace aoikit;

TEST_CASE("stream draws are a pure function of seed, stream and counter") {
  CounterRng a(42, 0), b(42, 0);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.counter() == 100);
}

TEST_CASE("streams and seeds differ") {
  CounterRng a(42, 0), b(42, 1), c(43, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    seen.insert(a.next_u64());
    seen.insert(b.next_u64());
    seen.insert(c.next_u64());
  }
  CHECK(seen.size() == 3000);
}

TEST_CASE("open unit draws stay inside (0, 1) with mean one half") {
  CounterRng r(7, 3);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = r.next_open01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("derived seeds are distinct per index") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(1, i));
  CHECK(seeds.size() == 1000);
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  CHECK(derive_seed(1, 5) != derive_seed(2, 5));
}
