#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "aoikit/dist.hpp"

namespace aoikit {

/// A function sampled at t_k = k h, k = 0..n. `values` holds the
/// right-continuous version f(t_k+) and `lefts` the left limits f(t_k-);
/// between nodes the function is linear from values[k] to lefts[k+1]. For
/// continuous solutions both vectors coincide. Beyond t_max the function is
/// extended linearly with its average slope over the last quarter of the grid.
class GridFn {
 public:
  GridFn() = default;
  GridFn(double h, std::vector<double> values, std::vector<double> lefts = {});

  double h() const { return h_; }
  double t_max() const { return h_ * static_cast<double>(values_.empty() ? 0 : values_.size() - 1); }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& lefts() const { return lefts_; }

  /// Right-continuous value; 0 for t < 0.
  double at(double t) const;
  /// Left limit f(t-); 0 for t <= 0.
  double left(double t) const;
  /// Integral of e^{-xi t} f(t) over [0, inf): exact per cell for the
  /// interpolant, plus the linear tail beyond t_max.
  double laplace(double xi) const;

 private:
  double tail_slope() const;

  double h_ = 0.0;
  std::vector<double> values_;
  std::vector<double> lefts_;
};

/// Grid used for one family of solves. `lattice` is set when every atom of a
/// purely atomic tau falls on a node; kernels are then exact point masses.
struct SolverGrid {
  double h;
  std::size_t n;  // number of steps; nodes are 0..n
  bool lattice;
  double t_max() const { return h * static_cast<double>(n); }
};

/// Default step E tau / 200.
double default_step(const Dist& tau);
/// Default horizon 40 max(E tau, E sigma).
double default_horizon(const Dist& tau, const Dist& sigma);

/// Picks the grid for kernels of tau. For a purely atomic tau the step is
/// shrunk (never enlarged) so that all atoms land on nodes when possible.
/// Throws StepTooCoarse if h > E tau / 20 and `guard` is set; InvalidSpec for
/// nonpositive h or t_max.
SolverGrid choose_grid(const Dist& tau, double h, double t_max, bool guard = true);

/// Samples g at the nodes, using g(t_k + 0) for values and g(t_k - 0) for left limits.
GridFn sample_forcing(const std::function<double(double)>& g, const SolverGrid& grid);

/// The measure w(x) P(tau in dx) on (0, t_max], discretized for convolution
/// against piecewise linear grid functions.
class Kernel {
 public:
  Kernel(const Dist& tau, const std::function<double(double)>& weight, const SolverGrid& grid);

  /// t -> E[w(tau) f(t - tau); tau <= t].
  GridFn convolve(const GridFn& f) const;

  /// Unique solution of f = forcing + convolve(f), marched forward in time;
  /// the lag-0 contribution is solved implicitly at each step.
  GridFn solve(const GridFn& forcing) const;

  const SolverGrid& grid() const { return grid_; }

 private:
  SolverGrid grid_;
  // Cell j covers (t_{j-1}, t_j]. For linear grids head_[j] and tail_[j] are
  // the integrals of w against the hat functions rising to t_j and falling
  // from t_{j-1}; for lattice grids head_[j] is the point mass at t_j.
  std::vector<double> head_;
  std::vector<double> tail_;
};

/// Convenience entry: f(t) = g(t) + E[w(tau) f(t - tau); tau <= t] on [0, t_max].
GridFn solve_volterra(const std::function<double(double)>& forcing, const std::function<double(double)>& weight,
                      const Dist& tau, double t_max, double h, bool guard = true);

/// E f(sigma) for a grid function, with left limits at atoms of sigma.
double expect_grid(const Dist& sigma, const GridFn& f);

}  // namespace aoikit
