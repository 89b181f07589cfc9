#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "aoikit/dist.hpp"

namespace aoikit {

/// A finite realization of arrival epochs T_1 < ... < T_n and service times.
/// Several policies simulated on the same Workload see identical inputs.
struct Workload {
  std::vector<double> arrivals;
  std::vector<double> services;
  std::uint64_t seed = 0;
  std::optional<Dist> tau;
  std::optional<Dist> sigma;

  std::size_t size() const { return arrivals.size(); }
  bool operator==(const Workload&) const = default;
};

/// T_1 is the first interarrival draw and T_{k+1} = T_k + tau_k. Interarrivals
/// come from stream 0 and services from stream 1 of the seed, so growing n
/// keeps the earlier prefix unchanged.
Workload generate_workload(const Dist& tau, const Dist& sigma, std::size_t n, std::uint64_t seed);

/// Wraps explicit lists after checking the invariants (throws InvalidSpec).
Workload make_workload(std::vector<double> arrivals, std::vector<double> services);

/// Throws InvalidSpec describing the first violated invariant.
void validate(const Workload& w);

/// CSV trace: a `# seed=... tau=... sigma=...` comment, the header
/// `index,arrival,service`, then one row per message with 17 significant digits.
void save_workload(const Workload& w, const std::filesystem::path& path);

/// Throws IoError if the file cannot be read, FormatError on malformed content.
Workload load_workload(const std::filesystem::path& path);

}  // namespace aoikit
