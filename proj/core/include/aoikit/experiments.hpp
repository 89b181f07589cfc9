#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aoikit/analytic.hpp"
#include "aoikit/config.hpp"
#include "aoikit/paths.hpp"
#include "aoikit/policies.hpp"

namespace aoikit {

/// Runs fn(i) for every i in [0, count) on up to `threads` workers (0 means
/// hardware concurrency). Results must be written by index; the first
/// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct ReplicationResult {
  PolicyKind policy;
  int replication = 0;
  PathStats alpha;
  PathStats beta;
  bool instability_warning = false;
};

struct PooledResult {
  PolicyKind policy;
  Measure measure = Measure::AoI;
  double mean = 0.0;
  double mean_se = 0.0;
  double atom_zero = 0.0;
  std::vector<std::pair<double, double>> lt;
  std::vector<std::pair<double, double>> cdf;
  bool instability_warning = false;
};

struct SimulationReport {
  std::vector<double> u_grid;
  std::vector<ReplicationResult> replications;  // ordered by policy, then replication
  std::vector<PooledResult> pooled;             // ordered by policy, then measure
};

/// Simulates every configured policy on `replications` coupled workloads
/// (replication r uses seed derive_seed(seed, r)); when trace_in is set the
/// single loaded workload is used instead. Writes trace_out for replication 0.
SimulationReport run_simulation(const ExperimentConfig& c);

/// Long-format CSV: a `# config_hash=...` comment, then
/// policy,replication,measure,statistic,argument,value,std_error.
void write_simulation_csv(const SimulationReport& r, std::uint64_t hash, std::ostream& out);
void write_simulation_json(const SimulationReport& r, std::uint64_t hash, std::ostream& out);

/// Time-average mean of AoI or NAoI for one policy on one workload, over the default window.
double simulated_mean(const PolicyKind& p, const Workload& w, Measure m);

/// Named Table 1 models at rates (lambda, mu): "mm", "mgi" (sigma = Det 1/mu),
/// "gim" (tau = Det 1/lambda), "gigi" (tau ~ U(0.5, 1.5)/lambda, sigma ~ U(0.2, 0.6)/mu).
Model table1_model(std::string_view name, double lambda, double mu);

struct Table1Row {
  std::string model;
  Discipline discipline = Discipline::Pushout;
  Measure measure = Measure::AoI;
  double analytic = 0.0;
  std::string method;
  double simulated = 0.0;
  double std_error = 0.0;
  double rel_error = 0.0;
};

/// Analytic and simulated means for each model; "custom" uses the config's tau and sigma.
std::vector<Table1Row> run_table1(const std::vector<std::pair<std::string, Model>>& models, const ExperimentConfig& c);
void write_table1_csv(const std::vector<Table1Row>& rows, std::uint64_t hash, std::ostream& out);

struct FigureData {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// fig3a, fig3b, fig3c (mean NAoI, M/M, M/D, M/mixture), dm1 (D/M mean NAoI
/// with simulated P2) and fifo (M/M mean AoI with simulated P2). mu = 1.
FigureData run_figure(std::string_view name, const ExperimentConfig& c);
void write_figure_csv(const FigureData& f, std::uint64_t hash, std::ostream& out);

struct VerifyOptions {
  int seeds = 20;
  std::size_t n = 10000;
  bool inject_fifo = false;  // compare FIFO against itself in the Observation 2 check
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<VerifyCheck> run_verify(const ExperimentConfig& c, const VerifyOptions& opts);

/// JSON array of {model, policy, measure, value, method, h, t_max, residuals}.
std::string analytic_json(const ExperimentConfig& c);

}  // namespace aoikit
