#include "aoikit/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "aoikit/errors.hpp"
#include "aoikit/rng.hpp"

namespace aoikit {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string hash_text(std::uint64_t hash) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, hash);
  return buf;
}

struct Paths {
  DriftPath alpha;
  StepPath beta;
  bool warning = false;
};

Paths extract_paths(const PolicyKind& p, const Workload& w) {
  OutcomeSeq o = simulate(p, w);
  Window win = default_window(w, o);
  return {extract_alpha(w, o, win), extract_beta(w, o, win), o.instability_warning};
}

double max_value(const DriftPath& p) {
  double m = 0.0;
  for (const auto& q : p.pieces) m = std::max(m, q.t1 - q.offset);
  return m;
}

double max_value(const StepPath& p) {
  double m = 0.0;
  for (const auto& q : p.pieces) m = std::max(m, q.value);
  return m;
}

// 99 percentiles of the time-average law of a path, duplicates removed.
template <class P>
std::vector<double> quantile_grid(const P& path) {
  PathCdf F(path);
  double top = max_value(path);
  std::vector<double> grid;
  for (int k = 1; k <= 99; ++k) {
    double q = k / 100.0, lo = 0.0, hi = top;
    if (F(lo) >= q) {
      hi = lo;
    } else {
      for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (F(mid) >= q ? hi : lo) = mid;
      }
    }
    if (grid.empty() || hi > grid.back()) grid.push_back(hi);
  }
  return grid;
}

std::vector<double> default_u_grid(double mean_service) {
  std::vector<double> g;
  for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) g.push_back(k / mean_service);
  return g;
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

// Mean across replications; with a single replication the batch-means error of that run.
Estimate pool(const std::vector<double>& means, double single_se) {
  Estimate e;
  for (double m : means) e.mean += m;
  e.mean /= static_cast<double>(means.size());
  if (means.size() < 2) {
    e.se = single_se;
    return e;
  }
  double ss = 0.0;
  for (double m : means) ss += (m - e.mean) * (m - e.mean);
  e.se = std::sqrt(ss / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
  return e;
}

struct Record {
  std::string policy;
  std::string replication;
  std::string measure;
  std::string statistic;
  std::optional<double> argument;
  double value = 0.0;
  std::optional<double> std_error;
};

void add_stats(std::vector<Record>& out, const std::string& policy, const std::string& rep, const char* measure,
               const PathStats& s) {
  out.push_back({policy, rep, measure, "mean", {}, s.time_mean, s.mean_se});
  out.push_back({policy, rep, measure, "atom_zero", {}, s.atom_zero, {}});
  out.push_back({policy, rep, measure, "window_start", {}, s.window.w0, {}});
  out.push_back({policy, rep, measure, "window_end", {}, s.window.w1, {}});
  for (auto [u, v] : s.lt) out.push_back({policy, rep, measure, "lt", u, v, {}});
  for (auto [x, v] : s.cdf) out.push_back({policy, rep, measure, "cdf", x, v, {}});
}

std::vector<Record> simulation_records(const SimulationReport& r) {
  std::vector<Record> out;
  for (const auto& rep : r.replications) {
    std::string p = rep.policy.name(), idx = std::to_string(rep.replication);
    add_stats(out, p, idx, "aoi", rep.alpha);
    add_stats(out, p, idx, "naoi", rep.beta);
    if (rep.policy.tag == PolicyTag::Fifo) {
      out.push_back({p, idx, "all", "instability_warning", {}, rep.instability_warning ? 1.0 : 0.0, {}});
    }
  }
  for (const auto& pr : r.pooled) {
    std::string p = pr.policy.name();
    const char* m = to_string(pr.measure);
    out.push_back({p, "pooled", m, "mean", {}, pr.mean, pr.mean_se});
    out.push_back({p, "pooled", m, "atom_zero", {}, pr.atom_zero, {}});
    for (auto [u, v] : pr.lt) out.push_back({p, "pooled", m, "lt", u, v, {}});
    for (auto [x, v] : pr.cdf) out.push_back({p, "pooled", m, "cdf", x, v, {}});
    if (pr.policy.tag == PolicyTag::Fifo && pr.measure == Measure::AoI) {
      out.push_back({p, "pooled", "all", "instability_warning", {}, pr.instability_warning ? 1.0 : 0.0, {}});
    }
  }
  return out;
}

PooledResult pool_measure(const std::vector<const PathStats*>& reps, const PolicyKind& p, Measure m) {
  PooledResult r;
  r.policy = p;
  r.measure = m;
  std::vector<double> means;
  for (const auto* s : reps) means.push_back(s->time_mean);
  Estimate e = pool(means, reps.front()->mean_se);
  r.mean = e.mean;
  r.mean_se = e.se;
  r.lt = reps.front()->lt;
  r.cdf = reps.front()->cdf;
  double k = static_cast<double>(reps.size());
  for (auto& [u, v] : r.lt) v = 0.0;
  for (auto& [x, v] : r.cdf) v = 0.0;
  for (const auto* s : reps) {
    r.atom_zero += s->atom_zero / k;
    for (std::size_t i = 0; i < r.lt.size(); ++i) r.lt[i].second += s->lt[i].second / k;
    for (std::size_t i = 0; i < r.cdf.size(); ++i) r.cdf[i].second += s->cdf[i].second / k;
  }
  return r;
}

}  // namespace

SimulationReport run_simulation(const ExperimentConfig& c) {
  validate(c);
  std::optional<Workload> trace;
  if (!c.trace_in.empty()) trace = load_workload(c.trace_in);
  const std::size_t reps = trace ? 1 : static_cast<std::size_t>(c.replications);
  const std::size_t np = c.policies.size();

  std::vector<std::vector<Paths>> paths(reps, std::vector<Paths>(np));
  parallel_for(reps, c.threads, [&](std::size_t r) {
    Workload w = trace ? *trace : generate_workload(c.tau, c.sigma, c.n_messages, derive_seed(c.seed, r));
    if (r == 0 && !c.trace_out.empty()) save_workload(w, c.trace_out);
    for (std::size_t p = 0; p < np; ++p) paths[r][p] = extract_paths(c.policies[p], w);
  });

  SimulationReport report;
  if (!c.u_grid.empty()) {
    report.u_grid = c.u_grid;
  } else if (trace && !trace->sigma) {
    double s = 0.0;
    for (double x : trace->services) s += x;
    report.u_grid = default_u_grid(s / static_cast<double>(trace->size()));
  } else {
    report.u_grid = default_u_grid(trace ? trace->sigma->mean() : c.sigma.mean());
  }

  std::vector<std::vector<double>> alpha_grid(np, c.x_grid), beta_grid(np, c.x_grid);
  if (c.x_grid.empty()) {
    for (std::size_t p = 0; p < np; ++p) {
      alpha_grid[p] = quantile_grid(paths[0][p].alpha);
      beta_grid[p] = quantile_grid(paths[0][p].beta);
    }
  }

  report.replications.resize(np * reps);
  parallel_for(np * reps, c.threads, [&](std::size_t k) {
    std::size_t p = k / reps, r = k % reps;
    const Paths& ps = paths[r][p];
    auto& out = report.replications[k];
    out.policy = c.policies[p];
    out.replication = static_cast<int>(r);
    out.alpha = compute_stats(ps.alpha, report.u_grid, alpha_grid[p], c.batches);
    out.beta = compute_stats(ps.beta, report.u_grid, beta_grid[p], c.batches);
    out.instability_warning = ps.warning;
  });

  for (std::size_t p = 0; p < np; ++p) {
    std::vector<const PathStats*> a, b;
    bool warning = false;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& rr = report.replications[p * reps + r];
      a.push_back(&rr.alpha);
      b.push_back(&rr.beta);
      warning = warning || rr.instability_warning;
    }
    report.pooled.push_back(pool_measure(a, c.policies[p], Measure::AoI));
    report.pooled.push_back(pool_measure(b, c.policies[p], Measure::NAoI));
    report.pooled[report.pooled.size() - 2].instability_warning = warning;
    report.pooled.back().instability_warning = warning;
  }
  return report;
}

void write_simulation_csv(const SimulationReport& r, std::uint64_t hash, std::ostream& out) {
  out << "# config_hash=" << hash_text(hash) << " command=simulate\n";
  out << "policy,replication,measure,statistic,argument,value,std_error\n";
  for (const auto& rec : simulation_records(r)) {
    out << rec.policy << ',' << rec.replication << ',' << rec.measure << ',' << rec.statistic << ','
        << (rec.argument ? fmt(*rec.argument) : "") << ',' << fmt(rec.value) << ','
        << (rec.std_error ? fmt(*rec.std_error) : "") << '\n';
  }
}

void write_simulation_json(const SimulationReport& r, std::uint64_t hash, std::ostream& out) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : simulation_records(r)) {
    nlohmann::json j = {{"policy", rec.policy},
                        {"replication", rec.replication},
                        {"measure", rec.measure},
                        {"statistic", rec.statistic},
                        {"value", rec.value}};
    if (rec.argument) j["argument"] = *rec.argument;
    if (rec.std_error) j["std_error"] = *rec.std_error;
    records.push_back(std::move(j));
  }
  nlohmann::json doc = {{"config_hash", hash_text(hash)}, {"command", "simulate"}, {"records", records}};
  out << doc.dump(1) << '\n';
}

double simulated_mean(const PolicyKind& p, const Workload& w, Measure m) {
  Paths ps = extract_paths(p, w);
  PathStats s = m == Measure::AoI ? compute_stats(ps.alpha, {}, {}) : compute_stats(ps.beta, {}, {});
  return s.time_mean;
}

Model table1_model(std::string_view name, double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidSpec("rates must be positive");
  if (name == "mm") return {Dist::exponential(lambda), Dist::exponential(mu)};
  if (name == "mgi") return {Dist::exponential(lambda), Dist::deterministic(1.0 / mu)};
  if (name == "gim") return {Dist::deterministic(1.0 / lambda), Dist::exponential(mu)};
  if (name == "gigi") return {Dist::uniform(0.5 / lambda, 1.5 / lambda), Dist::uniform(0.2 / mu, 0.6 / mu)};
  throw InvalidSpec("unknown model '" + std::string(name) + "' (expected mm, mgi, gim, gigi or custom)");
}

std::vector<Table1Row> run_table1(const std::vector<std::pair<std::string, Model>>& models,
                                  const ExperimentConfig& c) {
  validate(c);
  const std::size_t reps = static_cast<std::size_t>(c.replications);
  const Discipline discs[] = {Discipline::Pushout, Discipline::Blocking};
  const Measure measures[] = {Measure::AoI, Measure::NAoI};

  // stats[model][rep][disc*2 + measure]
  std::vector<std::vector<std::array<PathStats, 4>>> stats(models.size(), std::vector<std::array<PathStats, 4>>(reps));
  parallel_for(models.size() * reps, c.threads, [&](std::size_t k) {
    std::size_t mi = k / reps, r = k % reps;
    const Model& m = models[mi].second;
    Workload w = generate_workload(m.tau, m.sigma, c.n_messages, derive_seed(c.seed, r));
    for (int d = 0; d < 2; ++d) {
      Paths ps = extract_paths(d == 0 ? PolicyKind::pushout() : PolicyKind::blocking(), w);
      stats[mi][r][2 * d] = compute_stats(ps.alpha, {}, {}, c.batches);
      stats[mi][r][2 * d + 1] = compute_stats(ps.beta, {}, {}, c.batches);
    }
  });

  std::vector<Table1Row> rows;
  AnalyticOptions opts;
  opts.solver = c.solver;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    validate(models[mi].second);
    for (int d = 0; d < 2; ++d) {
      for (int m = 0; m < 2; ++m) {
        AnalyticResult a = mean(models[mi].second, discs[d], measures[m], opts);
        std::vector<double> means;
        for (std::size_t r = 0; r < reps; ++r) means.push_back(stats[mi][r][2 * d + m].time_mean);
        Estimate e = pool(means, stats[mi][0][2 * d + m].mean_se);
        rows.push_back({models[mi].first, discs[d], measures[m], a.value, a.method, e.mean, e.se,
                        std::abs(e.mean - a.value) / std::abs(a.value)});
      }
    }
  }
  return rows;
}

void write_table1_csv(const std::vector<Table1Row>& rows, std::uint64_t hash, std::ostream& out) {
  out << "# config_hash=" << hash_text(hash) << " command=table1\n";
  out << "model,policy,measure,analytic,method,simulated,std_error,rel_error\n";
  for (const auto& r : rows) {
    out << r.model << ',' << to_string(r.discipline) << ',' << to_string(r.measure) << ',' << fmt(r.analytic) << ','
        << r.method << ',' << fmt(r.simulated) << ',' << fmt(r.std_error) << ',' << fmt(r.rel_error) << '\n';
  }
}

namespace {

std::vector<double> lambda_grid(double step, int count) {
  std::vector<double> g;
  for (int k = 1; k <= count; ++k) g.push_back(step * k);
  return g;
}

Dist fig3c_sigma() { return Dist::mixture({0.5, 0.5}, {Dist::deterministic(1.0 / 3.0), Dist::exponential(0.6)}); }

}  // namespace

FigureData run_figure(std::string_view name, const ExperimentConfig& c) {
  AnalyticOptions opts;
  opts.solver = c.solver;
  FigureData f;
  if (name == "fig3a" || name == "fig3b" || name == "fig3c") {
    Dist sigma = name == "fig3a"   ? Dist::exponential(1.0)
                 : name == "fig3b" ? Dist::deterministic(1.0)
                                   : fig3c_sigma();
    f.columns = {"lambda", "pushout", "blocking"};
    for (double l : lambda_grid(0.1, 200)) {
      Model m{Dist::exponential(l), sigma};
      f.rows.push_back({l, mean(m, Discipline::Pushout, Measure::NAoI, opts).value,
                        mean(m, Discipline::Blocking, Measure::NAoI, opts).value});
    }
    return f;
  }
  if (name == "dm1" || name == "fifo") {
    const bool dm = name == "dm1";
    const Measure meas = dm ? Measure::NAoI : Measure::AoI;
    std::vector<double> grid = dm ? lambda_grid(0.1, 30) : lambda_grid(0.05, 19);
    f.columns = {"lambda", "pushout", "blocking", "p2"};
    if (!dm) f.columns.push_back("fifo");
    f.rows.assign(grid.size(), {});
    parallel_for(grid.size(), c.threads, [&](std::size_t i) {
      double l = grid[i];
      Model m{dm ? Dist::deterministic(1.0 / l) : Dist::exponential(l), Dist::exponential(1.0)};
      Workload w = generate_workload(m.tau, m.sigma, c.n_messages, derive_seed(c.seed, i));
      auto& row = f.rows[i];
      row = {l, mean(m, Discipline::Pushout, meas, opts).value, mean(m, Discipline::Blocking, meas, opts).value,
             simulated_mean(PolicyKind::pushout_two(), w, meas)};
      if (!dm) row.push_back(fifo_mean_aoi_mm(l, 1.0));
    });
    return f;
  }
  throw InvalidSpec("unknown figure '" + std::string(name) + "' (expected fig3a, fig3b, fig3c, dm1 or fifo)");
}

void write_figure_csv(const FigureData& f, std::uint64_t hash, std::ostream& out) {
  out << "# config_hash=" << hash_text(hash) << " command=figure\n";
  for (std::size_t i = 0; i < f.columns.size(); ++i) out << (i ? "," : "") << f.columns[i];
  out << '\n';
  for (const auto& row : f.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << '\n';
  }
}

namespace {

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const StepTooCoarse*>(&e)) return "StepTooCoarse";
  if (dynamic_cast<const QuadratureNonConvergence*>(&e)) return "QuadratureNonConvergence";
  if (dynamic_cast<const EmptyWindow*>(&e)) return "EmptyWindow";
  if (dynamic_cast<const InvalidSpec*>(&e)) return "InvalidSpec";
  if (dynamic_cast<const Unstable*>(&e)) return "Unstable";
  return "error";
}

// Workload families cycled through by the path checks: M/M, D/M, M/D.
Workload mixed_workload(std::size_t s, std::size_t n, std::uint64_t seed, double lambda) {
  switch (s % 3) {
    case 0:
      return generate_workload(Dist::exponential(lambda), Dist::exponential(1.0), n, seed);
    case 1:
      return generate_workload(Dist::deterministic(1.0 / lambda), Dist::exponential(1.0), n, seed);
    default:
      return generate_workload(Dist::exponential(lambda), Dist::deterministic(1.0), n, seed);
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

std::vector<VerifyCheck> run_verify(const ExperimentConfig& c, const VerifyOptions& opts) {
  std::vector<VerifyCheck> checks;
  const std::size_t seeds = static_cast<std::size_t>(std::max(opts.seeds, 1));
  AnalyticOptions aopts;
  aopts.solver = c.solver;
  auto run = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
      auto [ok, detail] = body();
      checks.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      checks.push_back({name, false, std::string(error_kind(e)) + ": " + e.what()});
    }
  };

  run("observation1", [&] {
    std::vector<Observation1Report> rep(seeds);
    parallel_for(seeds, c.threads, [&](std::size_t s) {
      rep[s] = check_observation1(mixed_workload(s, opts.n, derive_seed(c.seed, s), 0.5 + 0.25 * (s % 5)));
    });
    std::size_t bad = 0, pieces = 0;
    for (const auto& r : rep) {
      bad += r.equal ? 0 : 1;
      pieces += r.alpha_pieces + r.beta_pieces;
    }
    return std::pair{bad == 0, std::to_string(seeds) + " workloads, " + std::to_string(pieces) +
                                   " pieces compared, " + std::to_string(bad) + " mismatching"};
  });

  run("observation2", [&] {
    PolicyKind buffered = opts.inject_fifo ? PolicyKind::fifo() : PolicyKind::pushout_two();
    std::vector<Observation2Report> rep(seeds);
    parallel_for(seeds, c.threads, [&](std::size_t s) {
      double lambda = s % 2 == 0 ? 0.7 : 1.5;  // odd seeds overload the FIFO queue
      rep[s] = check_observation2(mixed_workload(s, opts.n, derive_seed(c.seed, 1000 + s), lambda), buffered);
    });
    std::size_t epochs = 0, violations = 0, degenerate = 0;
    for (const auto& r : rep) {
      epochs += r.epochs;
      violations += r.violations;
      degenerate += r.all_equal ? 1 : 0;
    }
    std::string detail = std::to_string(epochs) + " epochs, " + std::to_string(violations) + " violations";
    if (degenerate == seeds) {
      return std::pair{false, detail + "; degenerate: compared paths equal at every epoch (" + buffered.name() +
                                  " compared with FIFO)"};
    }
    return std::pair{violations == 0, detail};
  });

  run("degenerate_policies", [&] {
    std::vector<int> bad(seeds);
    parallel_for(seeds, c.threads, [&](std::size_t s) {
      Workload w = mixed_workload(s, opts.n, derive_seed(c.seed, 2000 + s), 1.0);
      bool ok = simulate(PolicyKind::block_then_push(0), w) == simulate(PolicyKind::pushout(), w) &&
                simulate(PolicyKind::push_then_block(0), w) == simulate(PolicyKind::blocking(), w);
      bad[s] = ok ? 0 : 1;
    });
    int n_bad = 0;
    for (int b : bad) n_bad += b;
    return std::pair{n_bad == 0, "bp:0 vs pushout, pb:0 vs blocking on " + std::to_string(seeds) + " workloads, " +
                                     std::to_string(n_bad) + " differing"};
  });

  const std::pair<const char*, Dist> taus[] = {
      {"exp(1)", Dist::exponential(1.0)}, {"det(1)", Dist::deterministic(1.0)}, {"uniform(0.5,1.5)", Dist::uniform(0.5, 1.5)}};
  for (const auto& [label, tau] : taus) {
    run(std::string("laplace_residuals ") + label, [&] {
      RenewalFunctions rf = renewal_functions(tau, Dist::exponential(1.0), 1.0, c.solver);
      double worst = 0.0;
      std::string where;
      for (double xi : {0.5, 1.0, 2.0}) {
        for (const auto& row : laplace_checks(rf, tau, xi).rows) {
          if (row.residual > worst) {
            worst = row.residual;
            where = row.name + " at xi=" + fmt(xi);
          }
        }
      }
      return std::pair{worst < 1e-3, "max residual " + fmt(worst) + " (" + where + "), h=" + fmt(rf.grid.h)};
    });
  }

  run("zero_atoms", [&] {
    Model m{Dist::exponential(1.0), Dist::exponential(1.0)};
    Workload w = generate_workload(m.tau, m.sigma, std::max<std::size_t>(opts.n * 10, 100000), derive_seed(c.seed, 3000));
    std::string detail;
    bool ok = true;
    for (Discipline d : {Discipline::Pushout, Discipline::Blocking}) {
      Paths ps = extract_paths(d == Discipline::Pushout ? PolicyKind::pushout() : PolicyKind::blocking(), w);
      double sim = compute_stats(ps.beta, {}, {}).atom_zero;
      double an = naoi_atom(m, d, aopts).value;
      ok = ok && std::abs(sim - an) < 0.01;
      detail += std::string(detail.empty() ? "" : ", ") + to_string(d) + " " + fmt(sim) + " vs " + fmt(an);
    }
    return std::pair{ok, detail};
  });

  run("decomposition", [&] {
    double worst = 0.0;
    Model mm{Dist::exponential(0.7), Dist::exponential(1.3)};
    Model gim{Dist::deterministic(1.0), Dist::exponential(1.3)};
    for (double u : {0.5, 1.0, 2.0}) {
      worst = std::max(worst, rel(lt_aoi(mm, Discipline::Pushout, u).value, 0.7 / (0.7 + u) * 1.3 / (1.3 + u)));
      double stationary_backward = (1.0 - gim.tau.laplace(u)) / (u * gim.tau.mean());
      worst = std::max(worst, rel(lt_aoi(gim, Discipline::Pushout, u).value, stationary_backward * 1.3 / (1.3 + u)));
    }
    return std::pair{worst < 1e-12, "max relative deviation " + fmt(worst)};
  });

  run("route_agreement", [&] {
    Model m{Dist::exponential(1.0), Dist::exponential(1.0)};
    double worst = 0.0;
    for (Discipline d : {Discipline::Pushout, Discipline::Blocking}) {
      for (Measure meas : {Measure::AoI, Measure::NAoI}) {
        double ref = mean(m, d, meas, {Route::MGI, c.solver}).value;
        worst = std::max(worst, rel(mean(m, d, meas, {Route::GIM, c.solver}).value, ref));
        worst = std::max(worst, rel(mean(m, d, meas, {Route::General, c.solver}).value, ref));
      }
    }
    return std::pair{worst < 1e-3, "M/M means, max relative gap between routes " + fmt(worst)};
  });

  run("gim_blocking_atom", [&] {
    Model m{Dist::exponential(1.0), Dist::exponential(1.0)};
    double derived = naoi_atom(m, Discipline::Blocking, aopts).value;
    double printed = blocking_gim_atom_printed(m);
    return std::pair{std::abs(derived - 0.25) < 1e-12,
                     "derived " + fmt(derived) + " (expected 0.25 at M/M), printed form gives " + fmt(printed)};
  });

  run("zeta_density", [&] {
    double worst = 0.0;
    bool nonneg = true;
    for (double rho : {0.5, 1.0, 2.0}) {
      double mass = 0.0;
      // composite Simpson on [0, 60]; the density decays at least like e^{-t/2}
      const int n = 60000;
      const double h = 60.0 / n;
      std::vector<double> g(n + 1);
      for (int i = 0; i <= n; ++i) {
        g[i] = zeta_density(rho, i * h);
        nonneg = nonneg && g[i] >= 0.0;
      }
      auto simpson = [&](const std::function<double(int)>& f) {
        double s = f(0) + f(n);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i);
        return s * h / 3.0;
      };
      mass = simpson([&](int i) { return g[i]; });
      worst = std::max(worst, std::abs(mass - 1.0));
      for (double u : {0.5, 1.0, 2.0}) {
        double lt = simpson([&](int i) { return g[i] * std::exp(-u * i * h); });
        worst = std::max(worst, std::abs(lt - zeta_laplace(rho, u)));
      }
    }
    return std::pair{nonneg && worst < 1e-6, std::string(nonneg ? "" : "negative values; ") + "max deviation " + fmt(worst)};
  });

  run("fifo_vs_blocking", [&] {
    int wrong = 0;
    for (int k = 1; k <= 19; ++k) {
      double l = 0.05 * k;
      Model m{Dist::exponential(l), Dist::exponential(1.0)};
      bool fifo_worse = fifo_mean_aoi_mm(l, 1.0) > mean(m, Discipline::Blocking, Measure::AoI).value;
      if (fifo_worse != (l > std::sqrt(2.0) - 1.0)) ++wrong;
    }
    return std::pair{wrong == 0, "FIFO above blocking exactly for lambda > sqrt(2)-1 on 19 grid points, " +
                                     std::to_string(wrong) + " exceptions"};
  });

  run("fifo_instability_flag", [&] {
    Workload w = generate_workload(Dist::exponential(1.5), Dist::exponential(1.0), opts.n, derive_seed(c.seed, 4000));
    bool flagged = simulate(PolicyKind::fifo(), w).instability_warning;
    return std::pair{flagged, flagged ? "rho=1.5 flagged" : "rho=1.5 not flagged"};
  });

  return checks;
}

std::string analytic_json(const ExperimentConfig& c) {
  validate(c);
  Model model{c.tau, c.sigma};
  validate(model);
  AnalyticOptions opts;
  opts.solver = c.solver;
  std::vector<double> u_grid = c.u_grid.empty() ? default_u_grid(c.sigma.mean()) : c.u_grid;

  std::map<double, double> residual_cache;
  auto residual = [&](double u) {
    auto it = residual_cache.find(u);
    if (it != residual_cache.end()) return it->second;
    RenewalFunctions rf = renewal_functions(c.tau, c.sigma, u, c.solver);
    double worst = 0.0;
    for (double xi : {0.5, 1.0, 2.0}) worst = std::max(worst, laplace_checks(rf, c.tau, xi).max_residual);
    return residual_cache[u] = worst;
  };

  nlohmann::json out = nlohmann::json::array();
  std::string model_text = "tau=" + c.tau.to_record() + " sigma=" + c.sigma.to_record();
  auto emit = [&](const char* policy, const std::string& measure, const AnalyticResult& r, double u) {
    nlohmann::json j = {{"model", model_text}, {"policy", policy},   {"measure", measure},
                        {"value", r.value},    {"method", r.method}, {"h", r.h},
                        {"t_max", r.t_max}};
    j["residuals"] = r.method == "renewal" ? nlohmann::json(residual(u)) : nlohmann::json(nullptr);
    out.push_back(std::move(j));
  };

  for (const auto& p : c.policies) {
    if (p.tag != PolicyTag::Pushout && p.tag != PolicyTag::Blocking) continue;
    Discipline d = p.tag == PolicyTag::Pushout ? Discipline::Pushout : Discipline::Blocking;
    const char* name = to_string(d);
    emit(name, "mean_aoi", mean(model, d, Measure::AoI, opts), 0.0);
    emit(name, "mean_naoi", mean(model, d, Measure::NAoI, opts), 0.0);
    emit(name, "atom_naoi", naoi_atom(model, d, opts), 0.0);
    for (double u : u_grid) {
      emit(name, "lt_aoi(" + fmt(u) + ")", lt_aoi(model, d, u, opts), u);
      emit(name, "lt_naoi(" + fmt(u) + ")", lt_naoi(model, d, u, opts), u);
    }
    if (d == Discipline::Blocking && c.sigma.is_exponential()) {
      AnalyticResult printed{blocking_gim_atom_printed(model), "closed-form:GI/M (as printed)", 0.0, 0.0};
      emit(name, "atom_naoi_printed", printed, 0.0);
    }
  }
  return out.dump(1) + "\n";
}

}  // namespace aoikit
