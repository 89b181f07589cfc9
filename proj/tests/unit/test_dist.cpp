#include <doctest.h>

#include <cmath>

#include "aoikit/dist.hpp"
#include "aoikit/errors.hpp"
#include "aoikit/quadrature.hpp"
#include "aoikit/rng.hpp"

using namespace aoikit;

namespace {

Dist mixture_c() { return Dist::mixture({0.5, 0.5}, {Dist::deterministic(1.0 / 3.0), Dist::exponential(0.6)}); }

double sample_mean(const Dist& d, int n, std::uint64_t seed) {
  CounterRng r(seed, 0);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += d.sample(r);
  return s / n;
}

}  // namespace

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(Dist::exponential(0.0), InvalidSpec);
  CHECK_THROWS_AS(Dist::exponential(-1.0), InvalidSpec);
  CHECK_THROWS_AS(Dist::exponential(INFINITY), InvalidSpec);
  CHECK_THROWS_AS(Dist::deterministic(0.0), InvalidSpec);
  CHECK_THROWS_AS(Dist::uniform(1.0, 1.0), InvalidSpec);
  CHECK_THROWS_AS(Dist::erlang(0, 1.0), InvalidSpec);
  CHECK_THROWS_AS(Dist::mixture({0.5, 0.6}, {Dist::exponential(1), Dist::exponential(2)}), InvalidSpec);
  CHECK_THROWS_AS(Dist::mixture({0.5}, {Dist::exponential(1), Dist::exponential(2)}), InvalidSpec);
  Dist inner = Dist::mixture({0.5, 0.5}, {Dist::exponential(1), mixture_c()});
  CHECK(inner.nesting_depth() == 2);
  CHECK_THROWS_AS(Dist::mixture({1.0}, {inner}), InvalidSpec);
}

TEST_CASE("sampling") {
  CounterRng r(1, 0);
  for (int i = 0; i < 10; ++i) CHECK(Dist::deterministic(1.0).sample(r) == 1.0);
  CHECK(sample_mean(Dist::exponential(2.0), 1000000, 11) == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sample_mean(mixture_c(), 1000000, 12) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sample_mean(Dist::uniform(0.5, 1.5), 200000, 13) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sample_mean(Dist::erlang(3, 2.0), 200000, 14) == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("Laplace transforms") {
  CHECK(Dist::exponential(1.0).laplace(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mixture_c().laplace(1.0) == doctest::Approx(0.5 * std::exp(-1.0 / 3.0) + 0.5 * 0.6 / 1.6).epsilon(1e-14));
  for (const Dist& d : {Dist::exponential(2.0), Dist::deterministic(0.7), Dist::uniform(0.2, 0.6),
                        Dist::erlang(2, 3.0), mixture_c()}) {
    CHECK(d.laplace(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // E e^{-uX} and E X e^{-uX} against quadrature of the law
    for (double u : {0.3, 2.0}) {
      CHECK(d.expect([u](double x) { return std::exp(-u * x); }) == doctest::Approx(d.laplace(u)).epsilon(1e-9));
      CHECK(d.expect([u](double x) { return x * std::exp(-u * x); }) ==
            doctest::Approx(d.tilted_mean(u)).epsilon(1e-9));
    }
  }
  // uniform tilted mean near u = 0 uses the series branch
  CHECK(Dist::uniform(0.5, 1.5).tilted_mean(1e-6) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("moments") {
  CHECK(Dist::exponential(1.0).moment(2) == doctest::Approx(2.0));
  CHECK(Dist::deterministic(1.0).moment(2) == doctest::Approx(1.0));
  CHECK(mixture_c().moment(2) == doctest::Approx(51.0 / 18.0).epsilon(1e-14));
  CHECK(mixture_c().mean() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Dist::uniform(0.5, 1.5).moment(2) == doctest::Approx(13.0 / 12.0).epsilon(1e-14));
  CHECK(Dist::erlang(3, 2.0).moment(2) == doctest::Approx(3.0 / 4.0 + 9.0 / 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(Dist::exponential(1.0).moment(3), InvalidSpec);
}

TEST_CASE("distribution functions") {
  Dist d = Dist::deterministic(1.0);
  CHECK(d.cdf(1.0) == 1.0);
  CHECK(d.sf(1.0) == 0.0);
  CHECK(d.sf_incl(1.0) == 1.0);
  CHECK(d.excess(0.25) == doctest::Approx(0.75));
  Dist e = Dist::exponential(2.0);
  CHECK(e.excess(1.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(e.partial_laplace_above(1.0, 0.5) == doctest::Approx(2.0 / 3.0 * std::exp(-1.5)).epsilon(1e-14));
  CHECK(e.upper_quantile(1e-10) == doctest::Approx(std::log(1e10) / 2.0).epsilon(1e-12));
  Dist m = mixture_c();
  CHECK(m.sf(0.5) == doctest::Approx(0.5 * std::exp(-0.3)).epsilon(1e-14));
  CHECK(m.sf_incl(1.0 / 3.0) == doctest::Approx(0.5 + 0.5 * std::exp(-0.2)).epsilon(1e-14));
  auto atoms = m.atoms();
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].second == 0.5);
  CHECK(Dist::deterministic(2.0).is_atomic());
  CHECK_FALSE(m.is_atomic());
  CHECK(m.upper_quantile(1e-10) == doctest::Approx(std::log(0.5e10) / 0.6).epsilon(1e-8));
}

TEST_CASE("expect_on restricts to (a, b]") {
  Dist d = Dist::deterministic(1.0);
  CHECK(d.expect_on([](double) { return 1.0; }, 0.0, 1.0) == 1.0);
  CHECK(d.expect_on([](double) { return 1.0; }, 1.0, 2.0) == 0.0);
  Dist e = Dist::exponential(1.0);
  CHECK(e.expect_on([](double) { return 1.0; }, 1.0, 2.0) == doctest::Approx(std::exp(-1.0) - std::exp(-2.0)));
}

TEST_CASE("cross moments") {
  // shortcut forms against the generic quadrature route
  const Dist laws[] = {Dist::exponential(1.0), Dist::exponential(2.5), Dist::deterministic(0.8),
                       Dist::uniform(0.5, 1.5), Dist::uniform(0.2, 0.6), mixture_c(), Dist::erlang(2, 2.0)};
  for (const Dist& tau : laws) {
    for (const Dist& sigma : laws) {
      CrossMoments a = cross_moments(tau, sigma), b = cross_moments_quadrature(tau, sigma);
      CHECK(a.e_min == doctest::Approx(b.e_min).epsilon(1e-7));
      CHECK(a.p_ge == doctest::Approx(b.p_ge).epsilon(1e-7));
      CHECK(a.e_pos == doctest::Approx(b.e_pos).epsilon(1e-7));
    }
  }
  CrossMoments mm = cross_moments(Dist::exponential(1.0), Dist::exponential(1.0));
  CHECK(mm.p_ge == doctest::Approx(0.5));
  CHECK(mm.e_min == doctest::Approx(0.5));
  CHECK(mm.e_pos == doctest::Approx(0.5));
  // tau = Det 1, sigma = Det 1: tau >= sigma always, (tau - sigma)^+ = 0
  CrossMoments dd = cross_moments(Dist::deterministic(1.0), Dist::deterministic(1.0));
  CHECK(dd.p_ge == 1.0);
  CHECK(dd.e_pos == 0.0);
}

TEST_CASE("records round-trip and parse errors carry the field") {
  for (const Dist& d : {Dist::exponential(1.0 / 3.0), Dist::deterministic(0.1), Dist::uniform(0.2, 0.6),
                        Dist::erlang(4, 1.5), mixture_c()}) {
    CHECK(parse_dist_record(d.to_record()) == d);
  }
  CHECK(parse_dist_record("{kind:\"exponential\", rate:2}") == Dist::exponential(2.0));
  CHECK(parse_dist_record(R"({"kind":"det","value":1})") == Dist::deterministic(1.0));
  CHECK_THROWS_AS(parse_dist_record("{kind:\"gamma\", rate:1}"), ConfigError);
  CHECK_THROWS_AS(parse_dist_record("{kind:\"exp\"}"), ConfigError);
  CHECK_THROWS_AS(parse_dist_record("{kind:\"exp\", rate:"), ConfigError);
  CHECK_THROWS_AS(parse_dist_record("{kind:\"exp\", rate:-1}"), InvalidSpec);
}

TEST_CASE("adaptive Simpson") {
  CHECK(adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 5.0) ==
        doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-10));
  const double br[] = {1.0};
  CHECK(adaptive_simpson_split([](double x) { return x < 1.0 ? 0.0 : 1.0; }, 0.0, 2.0, br) ==
        doctest::Approx(1.0).epsilon(1e-12));
  QuadratureOptions tight;
  tight.max_depth = 2;
  tight.tolerance = 1e-14;
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return std::sin(50 * x); }, 0.0, 3.0, tight),
                  QuadratureNonConvergence);
}
