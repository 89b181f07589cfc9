#include "aoikit/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

constexpr std::size_t kWarmupSuccesses = 100;
constexpr double kWarmupFraction = 0.05;

std::vector<double> success_departures(const OutcomeSeq& o) {
  std::vector<double> d;
  for (std::size_t i = 0; i < o.psi.size(); ++i)
    if (o.psi[i]) d.push_back(o.depart[i]);
  std::sort(d.begin(), d.end());
  return d;
}

void check_window(const FreshnessIndex& fi, Window win) {
  if (!(win.w1 > win.w0)) throw EmptyWindow("statistics window is empty");
  if (fi.times.empty() || fi.times.front() > win.w0)
    throw EmptyWindow("no successful departure precedes the window start");
}

struct BatchAccumulator {
  BatchAccumulator(double w0, double length, int batches)
      : w0(w0), width(length / batches), sums(static_cast<std::size_t>(batches), 0.0) {}

  // Adds the integral of g over [s, e) split by batch, where integral(s, e) is exact.
  template <class Integral>
  void add(double s, double e, Integral integral) {
    auto k = static_cast<std::size_t>(std::clamp((s - w0) / width, 0.0, static_cast<double>(sums.size() - 1)));
    while (s < e) {
      double bend = k + 1 == sums.size() ? e : std::min(e, w0 + (k + 1) * width);
      if (bend > s) sums[k] += integral(s, bend);
      s = bend;
      ++k;
    }
  }

  double standard_error() const {
    const double b = static_cast<double>(sums.size());
    if (sums.size() < 2) return 0.0;
    double mean = 0.0;
    for (double s : sums) mean += s / width;
    mean /= b;
    double ss = 0.0;
    for (double s : sums) ss += (s / width - mean) * (s / width - mean);
    return std::sqrt(ss / (b - 1.0) / b);
  }

  double w0;
  double width;
  std::vector<double> sums;
};

}  // namespace

std::optional<double> FreshnessIndex::at(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return std::nullopt;
  return freshest[static_cast<std::size_t>(it - times.begin()) - 1];
}

FreshnessIndex build_freshness(const Workload& w, const OutcomeSeq& o) {
  std::vector<std::pair<double, double>> events;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (o.psi[i]) events.emplace_back(o.depart[i], w.arrivals[i]);
  std::sort(events.begin(), events.end());
  FreshnessIndex fi;
  for (auto [t, a] : events) {
    if (!fi.freshest.empty() && a <= fi.freshest.back()) continue;
    if (!fi.times.empty() && fi.times.back() == t) {
      fi.freshest.back() = a;
    } else {
      fi.times.push_back(t);
      fi.freshest.push_back(a);
    }
  }
  return fi;
}

Window default_window(const Workload& w, const OutcomeSeq& o) {
  auto d = success_departures(o);
  if (d.empty()) throw EmptyWindow("no successful departure in the trace");
  double w0 = d[std::min(kWarmupSuccesses, d.size()) - 1];
  if (!w.arrivals.empty()) w0 = std::max(w0, kWarmupFraction * w.arrivals.back());
  return {w0, d.back()};
}

DriftPath extract_alpha(const Workload& w, const OutcomeSeq& o, Window win) {
  FreshnessIndex fi = build_freshness(w, o);
  check_window(fi, win);
  DriftPath path;
  auto it = std::upper_bound(fi.times.begin(), fi.times.end(), win.w0);
  double t = win.w0;
  double offset = fi.freshest[static_cast<std::size_t>(it - fi.times.begin()) - 1];
  for (; it != fi.times.end() && *it < win.w1; ++it) {
    path.pieces.push_back({t, *it, offset});
    t = *it;
    offset = fi.freshest[static_cast<std::size_t>(it - fi.times.begin())];
  }
  path.pieces.push_back({t, win.w1, offset});
  return path;
}

StepPath extract_beta(const Workload& w, const OutcomeSeq& o, Window win) {
  FreshnessIndex fi = build_freshness(w, o);
  check_window(fi, win);
  std::vector<double> breaks;
  auto a0 = std::upper_bound(w.arrivals.begin(), w.arrivals.end(), win.w0);
  auto a1 = std::lower_bound(a0, w.arrivals.end(), win.w1);
  auto r0 = std::upper_bound(fi.times.begin(), fi.times.end(), win.w0);
  auto r1 = std::lower_bound(r0, fi.times.end(), win.w1);
  breaks.reserve(static_cast<std::size_t>((a1 - a0) + (r1 - r0)) + 2);
  breaks.push_back(win.w0);
  std::merge(a0, a1, r0, r1, std::back_inserter(breaks));
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.push_back(win.w1);

  StepPath path;
  path.pieces.reserve(breaks.size() - 1);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    double t = breaks[k];
    double last_arrival = *(std::upper_bound(w.arrivals.begin(), w.arrivals.end(), t) - 1);
    path.pieces.push_back({t, breaks[k + 1], last_arrival - *fi.at(t)});
  }
  return path;
}

double value_at(const DriftPath& p, double t) {
  auto it = std::upper_bound(p.pieces.begin(), p.pieces.end(), t,
                             [](double x, const DriftPiece& q) { return x < q.t0; });
  if (it == p.pieces.begin() || t > p.pieces.back().t1) return std::nan("");
  return t - std::prev(it)->offset;
}

double value_at(const StepPath& p, double t) {
  auto it = std::upper_bound(p.pieces.begin(), p.pieces.end(), t,
                             [](double x, const StepPiece& q) { return x < q.t0; });
  if (it == p.pieces.begin() || t > p.pieces.back().t1) return std::nan("");
  return std::prev(it)->value;
}

PathStats compute_stats(const DriftPath& p, std::span<const double> u_grid, std::span<const double> x_grid,
                        int batches) {
  if (p.pieces.empty()) throw EmptyWindow("path has no pieces");
  PathStats s;
  s.window = {p.pieces.front().t0, p.pieces.back().t1};
  const double length = s.window.length();
  BatchAccumulator acc(s.window.w0, length, std::max(batches, 1));
  std::vector<double> lt(u_grid.size(), 0.0);
  std::vector<double> cdf(x_grid.size(), 0.0);
  double integral = 0.0;
  for (const auto& q : p.pieces) {
    const double len = q.t1 - q.t0;
    const double a = q.t0 - q.offset;
    const double b = q.t1 - q.offset;
    integral += 0.5 * (a + b) * len;
    acc.add(q.t0, q.t1, [&](double s0, double s1) { return 0.5 * ((s0 - q.offset) + (s1 - q.offset)) * (s1 - s0); });
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
      double u = u_grid[i];
      lt[i] += u == 0.0 ? len : std::exp(-u * a) * -std::expm1(-u * len) / u;
    }
    for (std::size_t i = 0; i < x_grid.size(); ++i) cdf[i] += std::clamp(x_grid[i] - a, 0.0, len);
  }
  s.time_mean = integral / length;
  s.mean_se = acc.standard_error();
  for (std::size_t i = 0; i < u_grid.size(); ++i) s.lt.emplace_back(u_grid[i], lt[i] / length);
  for (std::size_t i = 0; i < x_grid.size(); ++i) s.cdf.emplace_back(x_grid[i], cdf[i] / length);
  return s;
}

PathStats compute_stats(const StepPath& p, std::span<const double> u_grid, std::span<const double> x_grid,
                        int batches) {
  if (p.pieces.empty()) throw EmptyWindow("path has no pieces");
  PathStats s;
  s.window = {p.pieces.front().t0, p.pieces.back().t1};
  const double length = s.window.length();
  BatchAccumulator acc(s.window.w0, length, std::max(batches, 1));
  std::vector<double> lt(u_grid.size(), 0.0);
  std::vector<double> cdf(x_grid.size(), 0.0);
  double integral = 0.0;
  double zero = 0.0;
  for (const auto& q : p.pieces) {
    const double len = q.t1 - q.t0;
    integral += q.value * len;
    if (q.value == 0.0) zero += len;
    acc.add(q.t0, q.t1, [&](double s0, double s1) { return q.value * (s1 - s0); });
    for (std::size_t i = 0; i < u_grid.size(); ++i) lt[i] += len * std::exp(-u_grid[i] * q.value);
    for (std::size_t i = 0; i < x_grid.size(); ++i)
      if (q.value <= x_grid[i]) cdf[i] += len;
  }
  s.time_mean = integral / length;
  s.mean_se = acc.standard_error();
  s.atom_zero = zero / length;
  for (std::size_t i = 0; i < u_grid.size(); ++i) s.lt.emplace_back(u_grid[i], lt[i] / length);
  for (std::size_t i = 0; i < x_grid.size(); ++i) s.cdf.emplace_back(x_grid[i], cdf[i] / length);
  return s;
}

namespace {

std::vector<double> prefix_sums(const std::vector<double>& v) {
  std::vector<double> out(v.size() + 1, 0.0);
  std::partial_sum(v.begin(), v.end(), out.begin() + 1);
  return out;
}

double positive_part_sum(const std::vector<double>& sorted, const std::vector<double>& prefix, double x) {
  auto k = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
  return static_cast<double>(k) * x - prefix[k];
}

}  // namespace

PathCdf::PathCdf(const DriftPath& p) : drift_(true) {
  if (p.pieces.empty()) throw EmptyWindow("path has no pieces");
  length_ = p.pieces.back().t1 - p.pieces.front().t0;
  for (const auto& q : p.pieces) {
    lo_.push_back(q.t0 - q.offset);
    hi_.push_back(q.t1 - q.offset);
  }
  std::sort(lo_.begin(), lo_.end());
  std::sort(hi_.begin(), hi_.end());
  lo_prefix_ = prefix_sums(lo_);
  hi_prefix_ = prefix_sums(hi_);
}

PathCdf::PathCdf(const StepPath& p) : drift_(false) {
  if (p.pieces.empty()) throw EmptyWindow("path has no pieces");
  length_ = p.pieces.back().t1 - p.pieces.front().t0;
  std::vector<std::pair<double, double>> vm;
  for (const auto& q : p.pieces) vm.emplace_back(q.value, q.t1 - q.t0);
  std::sort(vm.begin(), vm.end());
  std::vector<double> mass;
  for (auto [v, m] : vm) {
    values_.push_back(v);
    mass.push_back(m);
  }
  mass_prefix_ = prefix_sums(mass);
}

double PathCdf::operator()(double x) const {
  if (drift_) {
    double s = positive_part_sum(lo_, lo_prefix_, x) - positive_part_sum(hi_, hi_prefix_, x);
    return std::clamp(s / length_, 0.0, 1.0);
  }
  auto k = static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
  return std::clamp(mass_prefix_[k] / length_, 0.0, 1.0);
}

namespace {

template <class Path, class Field>
void write_csv(const Path& p, const std::filesystem::path& path, const char* column, Field field) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "t0,t1," << column << "\n";
  char buf[96];
  for (const auto& q : p.pieces) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", q.t0, q.t1, field(q));
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

void write_path_csv(const DriftPath& p, const std::filesystem::path& path) {
  write_csv(p, path, "offset", [](const DriftPiece& q) { return q.offset; });
}

void write_path_csv(const StepPath& p, const std::filesystem::path& path) {
  write_csv(p, path, "value", [](const StepPiece& q) { return q.value; });
}

}  // namespace aoikit
