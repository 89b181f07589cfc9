#include "aoikit/volterra.hpp"

#include <algorithm>
#include <cmath>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

constexpr double kNodeTolerance = 1e-9;

}  // namespace

GridFn::GridFn(double h, std::vector<double> values, std::vector<double> lefts)
    : h_(h), values_(std::move(values)), lefts_(std::move(lefts)) {
  if (!(h_ > 0.0)) throw InvalidSpec("grid step must be positive");
  if (lefts_.empty()) lefts_ = values_;
  if (lefts_.size() != values_.size()) throw InvalidSpec("grid values and left limits differ in length");
}

double GridFn::tail_slope() const {
  std::size_t n = values_.size() - 1;
  if (n == 0) return 0.0;
  std::size_t m = std::max<std::size_t>(1, n / 4);
  return (values_[n] - values_[n - m]) / (static_cast<double>(m) * h_);
}

double GridFn::at(double t) const {
  if (t < 0.0 || values_.empty()) return 0.0;
  const std::size_t n = values_.size() - 1;
  double r = t / h_;
  if (r >= static_cast<double>(n)) return values_[n] + tail_slope() * (t - t_max());
  auto k = static_cast<std::size_t>(r);
  double frac = r - static_cast<double>(k);
  return values_[k] + (lefts_[k + 1] - values_[k]) * frac;
}

double GridFn::left(double t) const {
  if (t <= 0.0 || values_.empty()) return 0.0;
  double r = t / h_;
  double k = std::round(r);
  if (std::abs(r - k) <= kNodeTolerance * std::max(1.0, r) && k >= 1.0 &&
      k <= static_cast<double>(values_.size() - 1))
    return lefts_[static_cast<std::size_t>(k)];
  return at(t);
}

double GridFn::laplace(double xi) const {
  if (!(xi > 0.0)) throw InvalidSpec("Laplace argument must be positive");
  const std::size_t n = values_.size() - 1;
  const double x = xi * h_;
  const double decay = std::exp(-x);
  const double i0 = -std::expm1(-x) / xi;
  const double i1 = (1.0 - decay * (1.0 + x)) / (xi * xi);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double a = values_[k];
    double b = lefts_[k + 1];
    sum += std::exp(-xi * h_ * static_cast<double>(k)) * (a * i0 + (b - a) * i1 / h_);
  }
  const double tmax = t_max();
  sum += std::exp(-xi * tmax) * (values_[n] / xi + tail_slope() / (xi * xi));
  return sum;
}

double default_step(const Dist& tau) { return tau.mean() / 200.0; }

double default_horizon(const Dist& tau, const Dist& sigma) { return 40.0 * std::max(tau.mean(), sigma.mean()); }

SolverGrid choose_grid(const Dist& tau, double h, double t_max, bool guard) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidSpec("grid step must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidSpec("grid horizon must be positive");
  if (guard && h > tau.mean() / 20.0)
    throw StepTooCoarse("step " + std::to_string(h) + " exceeds E tau / 20 = " + std::to_string(tau.mean() / 20.0));
  SolverGrid g{h, 0, false};
  if (tau.is_atomic()) {
    auto atoms = tau.atoms();
    double smallest = atoms.front().first;
    auto m0 = static_cast<long>(std::ceil(smallest / h - kNodeTolerance));
    for (long m = std::max(1L, m0); m <= 4 * std::max(1L, m0); ++m) {
      double step = smallest / static_cast<double>(m);
      bool aligned = std::all_of(atoms.begin(), atoms.end(), [&](const auto& a) {
        double r = a.first / step;
        return std::abs(r - std::round(r)) <= kNodeTolerance * r;
      });
      if (aligned) {
        g.h = step;
        g.lattice = true;
        break;
      }
    }
  }
  g.n = static_cast<std::size_t>(std::ceil(t_max / g.h - kNodeTolerance));
  if (g.n == 0) g.n = 1;
  return g;
}

GridFn sample_forcing(const std::function<double(double)>& g, const SolverGrid& grid) {
  const double delta = kNodeTolerance * grid.h;
  std::vector<double> values(grid.n + 1);
  for (std::size_t k = 0; k <= grid.n; ++k) values[k] = g(static_cast<double>(k) * grid.h + delta);
  if (!grid.lattice) return GridFn(grid.h, std::move(values));
  std::vector<double> lefts(grid.n + 1);
  lefts[0] = values[0];
  for (std::size_t k = 1; k <= grid.n; ++k) lefts[k] = g(static_cast<double>(k) * grid.h - delta);
  return GridFn(grid.h, std::move(values), std::move(lefts));
}

Kernel::Kernel(const Dist& tau, const std::function<double(double)>& weight, const SolverGrid& grid)
    : grid_(grid), head_(grid.n + 1, 0.0), tail_(grid.n + 1, 0.0) {
  const double h = grid.h;
  if (grid.lattice) {
    for (auto [x, p] : tau.atoms()) {
      auto j = static_cast<std::size_t>(std::llround(x / h));
      if (j >= 1 && j <= grid.n) head_[j] += p * weight(x);
    }
    return;
  }
  for (std::size_t j = 1; j <= grid.n; ++j) {
    const double a = h * static_cast<double>(j - 1);
    const double b = h * static_cast<double>(j);
    if (tau.sf(a) == 0.0) break;
    head_[j] = tau.expect_on([&](double x) { return weight(x) * (x - a) / h; }, a, b);
    tail_[j] = tau.expect_on([&](double x) { return weight(x) * (b - x) / h; }, a, b);
  }
}

GridFn Kernel::convolve(const GridFn& f) const {
  const std::size_t n = grid_.n;
  if (f.size() != n + 1 || f.h() != grid_.h) throw InvalidSpec("grid function does not match the kernel grid");
  const auto& fv = f.values();
  const auto& fl = f.lefts();
  std::vector<double> out(n + 1, 0.0);
  std::size_t support = n;
  while (support > 0 && head_[support] == 0.0 && tail_[support] == 0.0) --support;
  if (grid_.lattice) {
    std::vector<double> out_left(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t top = std::min(k, support);
      double s = 0.0;
      double sl = 0.0;
      for (std::size_t j = 1; j <= top; ++j) {
        s += head_[j] * fv[k - j];
        if (j < k) sl += head_[j] * fl[k - j];
      }
      out[k] = s;
      out_left[k] = sl;
    }
    out_left[0] = out[0];
    return GridFn(grid_.h, std::move(out), std::move(out_left));
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t top = std::min(k, support);
    double s = 0.0;
    for (std::size_t j = 1; j <= top; ++j) s += head_[j] * fv[k - j] + tail_[j] * fv[k - j + 1];
    out[k] = s;
  }
  return GridFn(grid_.h, std::move(out));
}

GridFn Kernel::solve(const GridFn& forcing) const {
  const std::size_t n = grid_.n;
  if (forcing.size() != n + 1 || forcing.h() != grid_.h)
    throw InvalidSpec("forcing does not match the kernel grid");
  const auto& g = forcing.values();
  const auto& gl = forcing.lefts();
  std::vector<double> f(n + 1, 0.0);
  std::size_t support = n;
  while (support > 0 && head_[support] == 0.0 && tail_[support] == 0.0) --support;
  if (grid_.lattice) {
    std::vector<double> fl(n + 1, 0.0);
    f[0] = g[0];
    fl[0] = g[0];
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t top = std::min(k, support);
      double s = g[k];
      double sl = gl[k];
      for (std::size_t j = 1; j <= top; ++j) {
        s += head_[j] * f[k - j];
        if (j < k) sl += head_[j] * fl[k - j];
      }
      f[k] = s;
      fl[k] = sl;
    }
    return GridFn(grid_.h, std::move(f), std::move(fl));
  }
  const double diag = n >= 1 ? 1.0 - tail_[1] : 1.0;
  f[0] = g[0];
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t top = std::min(k, support);
    double s = g[k];
    for (std::size_t j = 1; j <= top; ++j) {
      s += head_[j] * f[k - j];
      if (j >= 2) s += tail_[j] * f[k - j + 1];
    }
    f[k] = s / diag;
  }
  return GridFn(grid_.h, std::move(f));
}

GridFn solve_volterra(const std::function<double(double)>& forcing, const std::function<double(double)>& weight,
                      const Dist& tau, double t_max, double h, bool guard) {
  SolverGrid grid = choose_grid(tau, h, t_max, guard);
  return Kernel(tau, weight, grid).solve(sample_forcing(forcing, grid));
}

double expect_grid(const Dist& sigma, const GridFn& f) {
  std::vector<double> nodes(f.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) nodes[k] = f.h() * static_cast<double>(k);
  return sigma.expect([&](double x) { return f.at(x); }, [&](double x) { return f.left(x); }, nodes);
}

}  // namespace aoikit
