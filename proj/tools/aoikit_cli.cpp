#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aoikit/config.hpp"
#include "aoikit/errors.hpp"
#include "aoikit/experiments.hpp"

namespace {

using namespace aoikit;

struct CommonFlags {
  std::string config;
  std::vector<std::string> policies;
  std::optional<double> lambda, mu;
  std::optional<std::string> tau, sigma;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<int> reps, threads;
  std::optional<double> h, t_max;
  std::string out;
  std::string trace_in, trace_out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Config file (flags override its keys)");
  cmd->add_option("--policy", f.policies, "Policies: pushout, blocking, bp:L, pb:L, p2, fifo, plifo")->delimiter(',');
  cmd->add_option("--lambda", f.lambda, "Poisson arrival rate (tau ~ Exp(lambda))");
  cmd->add_option("--mu", f.mu, "Exponential service rate (sigma ~ Exp(mu))");
  cmd->add_option("--tau", f.tau, "Interarrival law as a record, e.g. {kind:\"det\", value:1}");
  cmd->add_option("--sigma", f.sigma, "Service law as a record");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--n", f.n, "Messages per replication");
  cmd->add_option("--reps", f.reps, "Replications");
  cmd->add_option("--threads", f.threads, "Worker threads (0: all cores)");
  cmd->add_option("--step", f.h, "Renewal solver step h");
  cmd->add_option("--t-max", f.t_max, "Renewal solver horizon");
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
}

ExperimentConfig effective_config(const CommonFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.lambda) c.tau = Dist::exponential(*f.lambda);
  if (f.mu) c.sigma = Dist::exponential(*f.mu);
  if (f.tau) c.tau = parse_dist_record(*f.tau);
  if (f.sigma) c.sigma = parse_dist_record(*f.sigma);
  if (!f.policies.empty()) {
    c.policies.clear();
    for (const auto& p : f.policies) c.policies.push_back(parse_policy(p));
  }
  if (f.seed) c.seed = *f.seed;
  if (f.n) c.n_messages = *f.n;
  if (f.reps) c.replications = *f.reps;
  if (f.threads) c.threads = *f.threads;
  if (f.h) c.solver.h = *f.h;
  if (f.t_max) c.solver.t_max = *f.t_max;
  if (!f.out.empty()) c.outputs = {f.out};
  if (!f.trace_in.empty()) c.trace_in = f.trace_in;
  if (!f.trace_out.empty()) c.trace_out = f.trace_out;
  validate(c);
  return c;
}

// Writes text to the first configured output, or stdout when there is none.
void emit(const ExperimentConfig& c, const std::string& text) {
  if (c.outputs.empty() || c.outputs.front() == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.outputs.front(), std::ios::binary);
  if (!out) throw IoError("cannot open " + c.outputs.front() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + c.outputs.front());
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age of information simulator and analytic engine"};
  app.require_subcommand(1);

  CommonFlags sim_f, t1_f, fig_f, ver_f, an_f;

  auto* sim = app.add_subcommand("simulate", "Simulate policies and report path statistics");
  add_common(sim, sim_f);
  sim->add_option("--trace-in", sim_f.trace_in, "Simulate a saved workload instead of generating one");
  sim->add_option("--trace-out", sim_f.trace_out, "Save the first replication's workload");

  auto* t1 = app.add_subcommand("table1", "Analytic vs simulated means of AoI and NAoI");
  add_common(t1, t1_f);
  std::vector<std::string> models{"mm", "mgi", "gim", "gigi"};
  t1->add_option("models", models, "Models: mm, mgi, gim, gigi, custom (config tau and sigma)");

  auto* fig = app.add_subcommand("figure", "Curve data for a figure");
  add_common(fig, fig_f);
  std::string figure_name;
  fig->add_option("name", figure_name, "fig3a, fig3b, fig3c, dm1 or fifo")->required();

  auto* ver = app.add_subcommand("verify", "Run the invariant suite");
  add_common(ver, ver_f);
  VerifyOptions vopts;
  ver->add_option("--seeds", vopts.seeds, "Random workloads per path check");
  ver->add_option("--messages", vopts.n, "Messages per verification workload");
  ver->add_flag("--inject-fifo", vopts.inject_fifo, "Compare FIFO with itself in the Observation 2 check");

  auto* an = app.add_subcommand("analytic", "Evaluate analytic formulas as JSON");
  add_common(an, an_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      ExperimentConfig c = effective_config(sim_f);
      SimulationReport r = run_simulation(c);
      std::ostringstream out;
      if (!c.outputs.empty() && ends_with(c.outputs.front(), ".json")) {
        write_simulation_json(r, config_hash(c), out);
      } else {
        write_simulation_csv(r, config_hash(c), out);
      }
      emit(c, out.str());
      for (const auto& p : r.pooled) {
        if (p.instability_warning && p.measure == Measure::AoI) {
          std::cerr << "warning: " << p.policy.name() << " queue is unstable (arrival rate >= service rate)\n";
        }
      }
    } else if (t1->parsed()) {
      ExperimentConfig c = effective_config(t1_f);
      double lambda = t1_f.lambda.value_or(1.0), mu = t1_f.mu.value_or(1.0);
      std::vector<std::pair<std::string, Model>> list;
      for (const auto& m : models) {
        list.emplace_back(m, m == "custom" ? Model{c.tau, c.sigma} : table1_model(m, lambda, mu));
      }
      std::ostringstream out;
      write_table1_csv(run_table1(list, c), config_hash(c), out);
      emit(c, out.str());
    } else if (fig->parsed()) {
      ExperimentConfig c = effective_config(fig_f);
      std::ostringstream out;
      write_figure_csv(run_figure(figure_name, c), config_hash(c), out);
      emit(c, out.str());
    } else if (ver->parsed()) {
      ExperimentConfig c = effective_config(ver_f);
      bool ok = true;
      std::ostringstream out;
      for (const auto& check : run_verify(c, vopts)) {
        out << (check.pass ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
        ok = ok && check.pass;
      }
      emit(c, out.str());
      return ok ? 0 : 1;
    } else if (an->parsed()) {
      ExperimentConfig c = effective_config(an_f);
      emit(c, analytic_json(c));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
