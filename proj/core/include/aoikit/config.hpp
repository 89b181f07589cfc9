#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aoikit/dist.hpp"
#include "aoikit/policies.hpp"
#include "aoikit/renewal.hpp"

namespace aoikit {

struct ExperimentConfig {
  Dist tau = Dist::exponential(1.0);
  Dist sigma = Dist::exponential(1.0);
  std::vector<PolicyKind> policies{PolicyKind::pushout(), PolicyKind::blocking()};
  std::size_t n_messages = 100000;
  std::uint64_t seed = 1;
  int replications = 1;
  std::vector<double> u_grid;  // empty: {0.25, 0.5, 1, 2, 4} / E sigma
  std::vector<double> x_grid;  // empty: 99 quantiles of the first replication
  SolverOptions solver;
  std::vector<std::string> outputs;
  std::string trace_in;
  std::string trace_out;
  int threads = 0;  // 0: hardware concurrency
  int batches = 20;
};

/// Parses the flat `key = value` format (one key per line, `#` starts a
/// comment). Distribution values are tagged records such as
/// {kind:"exp", rate:1}; lists are comma-separated, optionally bracketed.
/// Throws ConfigError carrying the line number and key.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a config file; IoError if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& c);

/// FNV-1a hash of the canonical text.
std::uint64_t config_hash(const ExperimentConfig& c);

/// Checks cross-field invariants (replications >= 1, n >= 1, grids positive).
void validate(const ExperimentConfig& c);

std::vector<double> parse_number_list(std::string_view text);

}  // namespace aoikit
