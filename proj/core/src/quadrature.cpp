#include "aoikit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aoikit/errors.hpp"

namespace aoikit {
namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double min_width;
  int max_depth;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps,
                 int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * eps || (b - a) < min_width) {
      return left + right + diff / 15.0;
    }
    if (depth >= max_depth) {
      throw QuadratureNonConvergence("adaptive Simpson exceeded depth " +
                                     std::to_string(max_depth) + " on [" + std::to_string(a) +
                                     ", " + std::to_string(b) + "]");
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts) {
  if (!(b > a)) return 0.0;
  const Simpson s{f, opts.min_width_fraction * (b - a), opts.max_depth};
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  // Force one level of refinement so narrow features are not missed by a
  // coincidental three-point agreement.
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  return s.recurse(a, m, fa, flm, fm, left, 0.5 * opts.tolerance, 1) +
         s.recurse(m, b, fm, frm, fb, right, 0.5 * opts.tolerance, 1);
}

double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                              std::span<const double> breakpoints,
                              const QuadratureOptions& opts) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  const double range = b - a;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    QuadratureOptions piece = opts;
    piece.tolerance = opts.tolerance * (hi - lo) / range;
    piece.min_width_fraction = opts.min_width_fraction * range / (hi - lo);
    total += adaptive_simpson(f, lo, hi, piece);
  }
  return total;
}

}  // namespace aoikit
