#include <doctest.h>

#include <cmath>

#include "aoikit/errors.hpp"
#include "aoikit/renewal.hpp"
#include "aoikit/volterra.hpp"

using namespace aoikit;

TEST_CASE("renewal function and W for exponential interarrivals") {
  Dist tau = Dist::exponential(1.0);
  GridFn U = solve_volterra([](double) { return 1.0; }, [](double) { return 1.0; }, tau, 20.0, 5e-3);
  CHECK(U.at(2.0) == doctest::Approx(3.0).epsilon(1e-5));
  double worst = 0.0;
  for (double t = 0.0; t <= 20.0; t += 0.01) worst = std::max(worst, std::abs(U.at(t) - (1.0 + t)));
  CHECK(worst < 1e-3);

  // W_1 = E[e^{-tau}; tau > t] + (e^{-x} F) * W_1
  GridFn W = solve_volterra([&](double t) { return tau.partial_laplace_above(1.0, t); },
                            [](double x) { return std::exp(-x); }, tau, 20.0, 5e-3);
  CHECK(W.at(1.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-4));
  worst = 0.0;
  for (double t = 0.0; t <= 20.0; t += 0.01) worst = std::max(worst, std::abs(W.at(t) - 0.5 * std::exp(-t)));
  CHECK(worst < 1e-3);
}

TEST_CASE("homogeneous equation has the zero solution") {
  GridFn f = solve_volterra([](double) { return 0.0; }, [](double) { return 1.0; }, Dist::uniform(0.5, 1.5), 10.0,
                            0.01);
  for (double v : f.values()) CHECK(v == 0.0);
}

TEST_CASE("deterministic interarrivals are solved exactly on the lattice") {
  // U(t) counts renewals strictly before t: U = 1 + floor-type steps
  Dist tau = Dist::deterministic(1.0);
  GridFn U = solve_volterra([](double) { return 1.0; }, [](double) { return 1.0; }, tau, 10.0, 0.01);
  CHECK(U.at(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(U.at(2.5) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(U.left(2.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("step guard") {
  Dist tau = Dist::exponential(1.0);
  CHECK_THROWS_AS(choose_grid(tau, 0.2, 10.0), StepTooCoarse);
  CHECK_NOTHROW(choose_grid(tau, 0.2, 10.0, false));
  SolverOptions o;
  o.h = 0.2;
  CHECK_THROWS_AS(renewal_functions(tau, Dist::exponential(1.0), 1.0, o), StepTooCoarse);
}

TEST_CASE("grid function transform") {
  // f(t) = e^{-t} sampled finely transforms to 1/(1 + xi)
  const double h = 1e-3;
  std::vector<double> v;
  for (int k = 0; k <= 40000; ++k) v.push_back(std::exp(-k * h));
  GridFn f(h, v);
  CHECK(f.laplace(1.0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(f.at(-1.0) == 0.0);
}

TEST_CASE("renewal functions at t = 0+") {
  for (const Dist& tau : {Dist::exponential(1.0), Dist::uniform(0.5, 1.5), Dist::deterministic(1.0)}) {
    RenewalFunctions rf = renewal_functions(tau, Dist::exponential(1.0), 0.7);
    CHECK(rf.V.at(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rf.Q.at(0.0) == doctest::Approx(tau.mean()).epsilon(1e-10));
    CHECK(rf.U.at(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Z against its transform for Poisson arrivals") {
  Dist tau = Dist::exponential(1.0), sigma = Dist::exponential(1.0);
  RenewalFunctions rf = renewal_functions(tau, sigma, 1.0);
  CHECK(expect_grid(sigma, rf.Z) / expect_grid(sigma, rf.U) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("Laplace residuals") {
  for (const Dist& tau : {Dist::exponential(1.0), Dist::deterministic(1.0), Dist::uniform(0.5, 1.5)}) {
    RenewalFunctions rf = renewal_functions(tau, Dist::exponential(1.0), 1.0);
    for (double xi : {0.5, 1.0, 2.0}) {
      LaplaceReport r = laplace_checks(rf, tau, xi);
      CHECK(r.rows.size() >= 5);
      CHECK(r.max_residual < 1e-3);
    }
  }
}
