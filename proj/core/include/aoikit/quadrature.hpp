#pragma once

#include <functional>
#include <span>

namespace aoikit {

struct QuadratureOptions {
  double tolerance = 1e-10;  // absolute, over the whole interval
  int max_depth = 50;
  // Subintervals narrower than this fraction of the range are accepted as-is
  // (handles jump discontinuities of the integrand).
  double min_width_fraction = 1e-13;
};

/// Adaptive Simpson integral of f over [a, b].
/// Throws QuadratureNonConvergence when refinement exceeds max_depth.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts = {});

/// Same, but splits [a, b] at every breakpoint that falls strictly inside.
/// Breakpoints need not be sorted.
double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                              std::span<const double> breakpoints,
                              const QuadratureOptions& opts = {});

}  // namespace aoikit
