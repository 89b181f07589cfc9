#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aoikit/policies.hpp"
#include "aoikit/workload.hpp"

namespace aoikit {

struct Window {
  double w0;
  double w1;
  double length() const { return w1 - w0; }
};

/// alpha(t) = t - offset on [t0, t1).
struct DriftPiece {
  double t0;
  double t1;
  double offset;
  bool operator==(const DriftPiece&) const = default;
};

/// beta(t) = value on [t0, t1).
struct StepPiece {
  double t0;
  double t1;
  double value;
  bool operator==(const StepPiece&) const = default;
};

struct DriftPath {
  std::vector<DriftPiece> pieces;
  bool operator==(const DriftPath&) const = default;
};

struct StepPath {
  std::vector<StepPiece> pieces;
  bool operator==(const StepPath&) const = default;
};

/// Epochs at which the freshest delivered arrival time A*_t increases, with
/// the new value. A*_t = max{T_n : psi_n = 1, T'_n <= t}.
struct FreshnessIndex {
  std::vector<double> times;
  std::vector<double> freshest;

  /// A*_t, or nullopt when nothing has been delivered by t.
  std::optional<double> at(double t) const;
};

FreshnessIndex build_freshness(const Workload& w, const OutcomeSeq& o);

/// Warm-up window: starts at the later of 5% of the last arrival epoch and the
/// 100th successful departure (or the last one when there are fewer), ends at
/// the last successful departure. Throws EmptyWindow if nothing was delivered.
Window default_window(const Workload& w, const OutcomeSeq& o);

/// Throws EmptyWindow when no successful departure happens by w0 or the window is empty.
DriftPath extract_alpha(const Workload& w, const OutcomeSeq& o, Window win);
StepPath extract_beta(const Workload& w, const OutcomeSeq& o, Window win);

double value_at(const DriftPath& p, double t);
double value_at(const StepPath& p, double t);

struct PathStats {
  Window window{};
  double time_mean = 0.0;
  double mean_se = 0.0;    // batch means over equal-length time batches
  double atom_zero = 0.0;  // fraction of time at exactly 0
  std::vector<std::pair<double, double>> lt;   // (u, time-average of e^{-u X})
  std::vector<std::pair<double, double>> cdf;  // (x, fraction of time with X <= x)
};

constexpr int kDefaultBatches = 20;

/// Exact per-piece integrals over the path's span.
PathStats compute_stats(const DriftPath& p, std::span<const double> u_grid, std::span<const double> x_grid,
                        int batches = kDefaultBatches);
PathStats compute_stats(const StepPath& p, std::span<const double> u_grid, std::span<const double> x_grid,
                        int batches = kDefaultBatches);

/// Time-average CDF of a path, evaluable at many points in O(log pieces).
class PathCdf {
 public:
  explicit PathCdf(const DriftPath& p);
  explicit PathCdf(const StepPath& p);
  double operator()(double x) const;

 private:
  // Drift: F(x) = (sum (x - a_i)^+ - sum (x - b_i)^+) / L over piece ranges [a_i, b_i).
  // Step: F(x) = mass of values <= x.
  bool drift_ = true;
  double length_ = 0.0;
  std::vector<double> lo_, lo_prefix_, hi_, hi_prefix_;
  std::vector<double> values_, mass_prefix_;
};

void write_path_csv(const DriftPath& p, const std::filesystem::path& path);
void write_path_csv(const StepPath& p, const std::filesystem::path& path);

struct Observation1Report {
  bool equal = true;
  std::optional<double> first_mismatch;
  std::size_t alpha_pieces = 0;
  std::size_t beta_pieces = 0;
};

/// Simulates preemptive LIFO and Pushout on w and compares their alpha and
/// beta paths piece-for-piece over [first Pushout success departure, last Pushout
/// success departure].
Observation1Report check_observation1(const Workload& w);

struct Observation2Report {
  std::size_t epochs = 0;
  std::size_t violations = 0;
  std::optional<double> first_violation;
  bool all_equal = true;  // alpha equal at every epoch
};

/// At every successful departure epoch of `buffered` (PushoutTwo unless overridden),
/// checks alpha_FIFO(t) >= alpha(t) and beta_FIFO(t) >= beta(t).
Observation2Report check_observation2(const Workload& w, const PolicyKind& buffered = PolicyKind::pushout_two());

}  // namespace aoikit
