// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "aoikit/analytic.hpp"
#include "aoikit/errors.hpp"
#include "aoikit/experiments.hpp"
#include "aoikit/renewal.hpp"
#include "aoikit/rng.hpp"
#include "aoikit/volterra.hpp"

using namespace aoikit;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Model mm(double l, double m) { return {Dist::exponential(l), Dist::exponential(m)}; }

Workload mixed(std::size_t k, std::size_t n, std::uint64_t seed, double lambda) {
  switch (k % 3) {
    case 0:
      return generate_workload(Dist::exponential(lambda), Dist::exponential(1.0), n, seed);
    case 1:
      return generate_workload(Dist::deterministic(1.0 / lambda), Dist::exponential(1.0), n, seed);
    default:
      return generate_workload(Dist::exponential(lambda), Dist::deterministic(1.0), n, seed);
  }
}

ExperimentConfig mm_config(std::size_t n, int reps) {
  ExperimentConfig c;
  c.n_messages = n;
  c.replications = reps;
  c.seed = 2024;
  return c;
}

}  // namespace

int main() {

  criterion(1, "Table 1 at M/M, lambda=mu=1", [&] {
    auto t0 = std::chrono::steady_clock::now();
    auto rows = run_table1({{"mm", mm(1, 1)}}, mm_config(100000, 10));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double exact[] = {2.0, 1.0, 2.5, 1.5};
    bool ok = secs < 30.0;
    std::string d;
    for (std::size_t i = 0; i < 4; ++i) {
      ok = ok && rows[i].analytic == exact[i] && rows[i].rel_error < 0.015;
      d += std::string(to_string(rows[i].discipline)) + "-" + to_string(rows[i].measure) + " " + num(rows[i].analytic) +
           "/" + num(rows[i].simulated) + " ";
    }
    return Outcome{ok, d + "runtime " + num(secs) + "s"};
  });

  ExperimentConfig one = mm_config(100000, 1);
  one.u_grid = {0.5, 1.0, 2.0};
  SimulationReport mm_run = run_simulation(one);

  criterion(2, "NAoI zero atoms at M/M", [&] {
    double p = mm_run.pooled[1].atom_zero, b = mm_run.pooled[3].atom_zero;
    return Outcome{std::abs(p - 0.5) <= 0.01 && std::abs(b - 0.25) <= 0.01,
                   "pushout " + num(p) + " (0.5), blocking " + num(b) + " (0.25)"};
  });

  criterion(3, "renewal solver vs closed forms, Exp(1), h=5e-3", [&] {
    Dist tau = Dist::exponential(1.0);
    SolverOptions o;
    o.h = 5e-3;
    o.t_max = 20.0;
    RenewalFunctions rf = renewal_functions(tau, Dist::exponential(1.0), 1.0, o);
    double eu = 0.0, ew = 0.0;
    for (int k = 0; k <= 8000; ++k) {
      double t = 20.0 * k / 8000;
      eu = std::max(eu, std::abs(rf.U.at(t) - (1.0 + t)));
      ew = std::max(ew, std::abs(rf.W.at(t) - 0.5 * std::exp(-t)));
    }
    return Outcome{eu < 1e-3 && ew < 1e-3, "max|U-(1+t)| " + num(eu) + ", max|W_1-0.5e^-t| " + num(ew)};
  });

  criterion(4, "Laplace residuals of the renewal functions", [&] {
    const std::pair<const char*, Dist> taus[] = {{"Exp(1)", Dist::exponential(1.0)},
                                                 {"Det(1)", Dist::deterministic(1.0)},
                                                 {"U(0.5,1.5)", Dist::uniform(0.5, 1.5)}};
    bool ok = true;
    std::string d;
    for (const auto& [name, tau] : taus) {
      RenewalFunctions rf = renewal_functions(tau, Dist::exponential(1.0), 1.0);
      double worst = 0.0;
      for (double xi : {0.5, 1.0, 2.0}) worst = std::max(worst, laplace_checks(rf, tau, xi).max_residual);
      ok = ok && worst < 1e-3;
      d += std::string(name) + " " + num(worst) + " ";
    }
    return Outcome{ok, "max relative residual " + d};
  });

  criterion(5, "empirical vs analytic Laplace transforms at M/M", [&] {
    double worst = 0.0;
    for (const auto& p : mm_run.pooled) {
      Discipline d = p.policy == PolicyKind::pushout() ? Discipline::Pushout : Discipline::Blocking;
      for (auto [u, v] : p.lt) {
        double a = p.measure == Measure::AoI ? lt_aoi(mm(1, 1), d, u).value : lt_naoi(mm(1, 1), d, u).value;
        worst = std::max(worst, std::abs(v - a));
      }
    }
    return Outcome{worst < 0.01, "max |lt_sim - lt_analytic| " + num(worst)};
  });

  criterion(6, "KS distance of pushout AoI to Exp(1)+Exp(1)", [&] {
    Workload w = generate_workload(Dist::exponential(1.0), Dist::exponential(1.0), 100000, derive_seed(2024, 0));
    OutcomeSeq o = simulate(PolicyKind::pushout(), w);
    PathCdf F(extract_alpha(w, o, default_window(w, o)));
    double ks = 0.0;
    for (int k = 0; k <= 40000; ++k) {
      double x = k * 1e-3;
      ks = std::max(ks, std::abs(F(x) - mm_pushout_aoi_cdf(1.0, 1.0, x)));
    }
    return Outcome{ks < 0.01, "D = " + num(ks)};
  });

  criterion(7, "Observation 1: preemptive LIFO and pushout paths coincide", [&] {
    std::vector<Observation1Report> r(100);
    parallel_for(100, 0, [&](std::size_t k) { r[k] = check_observation1(mixed(k, 10000, derive_seed(7, k), 0.5 + 0.25 * (k % 5))); });
    int bad = 0;
    for (const auto& x : r) bad += x.equal ? 0 : 1;
    return Outcome{bad == 0, "100 workloads (M/M, D/M, M/D), " + std::to_string(bad) + " mismatching"};
  });

  criterion(8, "Observation 2: FIFO never fresher than P2", [&] {
    std::vector<Observation2Report> r(100);
    parallel_for(100, 0, [&](std::size_t k) {
      r[k] = check_observation2(mixed(k, 10000, derive_seed(8, k), k % 2 ? 1.5 : 0.7));
    });
    std::size_t v = 0, epochs = 0;
    for (const auto& x : r) {
      v += x.violations;
      epochs += x.epochs;
    }
    return Outcome{v == 0, std::to_string(epochs) + " epochs on 100 workloads (half with lambda=1.5), " +
                               std::to_string(v) + " violations"};
  });

  criterion(9, "NAoI crossover for the mixture service law", [&] {
    Dist sigma = Dist::mixture({0.5, 0.5}, {Dist::deterministic(1.0 / 3.0), Dist::exponential(0.6)});
    double root = crossover([&](double l) { return Model{Dist::exponential(l), sigma}; }, Measure::NAoI, 5.0, 20.0);
    return Outcome{std::abs(root - 11.2) <= 0.1, "lambda* = " + num(root)};
  });

  criterion(10, "FIFO mean AoI", [&] {
    double a = fifo_mean_aoi_mm(0.5, 1.0);
    Workload w = generate_workload(Dist::exponential(0.5), Dist::exponential(1.0), 100000, derive_seed(10, 0));
    double s = simulated_mean(PolicyKind::fifo(), w, Measure::AoI);
    int wrong = 0;
    for (int k = 1; k <= 19; ++k) {
      double l = 0.05 * k;
      bool above = fifo_mean_aoi_mm(l, 1.0) > mean(mm(l, 1.0), Discipline::Blocking, Measure::AoI).value;
      if (above != (l > std::sqrt(2.0) - 1.0)) ++wrong;
    }
    return Outcome{a == 3.5 && std::abs(s - a) / a < 0.02 && wrong == 0,
                   "analytic " + num(a) + ", simulated " + num(s) + ", ordering exceptions on grid " +
                       std::to_string(wrong)};
  });

  criterion(11, "GI/GI blocking means (renewal route) vs simulation", [&] {
    Model m{Dist::uniform(0.5, 1.5), Dist::uniform(0.2, 0.6)};
    ExperimentConfig c = mm_config(100000, 10);
    auto rows = run_table1({{"gigi", m}}, c);
    bool ok = true;
    std::string d;
    for (const auto& r : rows) {
      if (r.discipline != Discipline::Blocking) continue;
      ok = ok && r.method == "renewal" && r.rel_error < 0.02;
      d += std::string(to_string(r.measure)) + " " + num(r.analytic) + " (" + r.method + ") vs " + num(r.simulated) +
           " ";
    }
    return Outcome{ok, d};
  });

  criterion(12, "density of the positive blocking NAoI part", [&] {
    double worst = 0.0;
    bool nonneg = true;
    for (double rho : {0.5, 1.0, 2.0}) {
      const int n = 100000;
      const double h = 80.0 / n;
      double mass = 0.0, lt[3] = {0, 0, 0};
      const double us[] = {0.5, 1.0, 2.0};
      for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double g = zeta_density(rho, i * h);
        nonneg = nonneg && g >= 0.0;
        mass += w * g;
        for (int k = 0; k < 3; ++k) lt[k] += w * g * std::exp(-us[k] * i * h);
      }
      worst = std::max(worst, std::abs(mass * h / 3 - 1.0));
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(lt[k] * h / 3 - zeta_laplace(rho, us[k])));
    }
    return Outcome{nonneg && worst < 1e-6, std::string(nonneg ? "nonnegative" : "NEGATIVE") + ", max deviation " + num(worst)};
  });

  criterion(13, "bp:0 = pushout and pb:0 = blocking outcome-for-outcome", [&] {
    std::vector<int> bad(100);
    parallel_for(100, 0, [&](std::size_t k) {
      Workload w = mixed(k, 10000, derive_seed(13, k), 0.5 + 0.25 * (k % 5));
      bad[k] = simulate(PolicyKind::block_then_push(0), w) == simulate(PolicyKind::pushout(), w) &&
                       simulate(PolicyKind::push_then_block(0), w) == simulate(PolicyKind::blocking(), w)
                   ? 0
                   : 1;
    });
    int n = 0;
    for (int b : bad) n += b;
    return Outcome{n == 0, "100 workloads, " + std::to_string(n) + " differing"};
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
