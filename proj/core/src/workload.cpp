#include "aoikit/workload.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

constexpr std::uint64_t kArrivalStream = 0;
constexpr std::uint64_t kServiceStream = 1;

std::string format_row(std::size_t index, double arrival, double service) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", index, arrival, service);
  return buf;
}

double parse_number(std::string_view field, int line) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw FormatError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void parse_comment(std::string_view text, Workload& w) {
  auto seed_pos = text.find("seed=");
  auto tau_pos = text.find(" tau=");
  auto sigma_pos = text.find(" sigma=");
  if (seed_pos != std::string_view::npos) {
    auto end = text.find(' ', seed_pos);
    auto digits = text.substr(seed_pos + 5, end == std::string_view::npos ? end : end - seed_pos - 5);
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), w.seed);
    if (res.ec != std::errc()) throw FormatError("bad seed in trace header");
  }
  try {
    if (tau_pos != std::string_view::npos && sigma_pos != std::string_view::npos && tau_pos < sigma_pos) {
      w.tau = parse_dist_record(trim(text.substr(tau_pos + 5, sigma_pos - tau_pos - 5)));
      w.sigma = parse_dist_record(trim(text.substr(sigma_pos + 7)));
    }
  } catch (const Error& e) {
    throw FormatError(std::string("bad distribution in trace header: ") + e.what());
  }
}

}  // namespace

void validate(const Workload& w) {
  if (w.arrivals.size() != w.services.size()) throw InvalidSpec("arrivals and services differ in length");
  for (std::size_t i = 0; i < w.arrivals.size(); ++i) {
    if (!std::isfinite(w.arrivals[i])) throw InvalidSpec("arrival " + std::to_string(i + 1) + " is not finite");
    if (i == 0 && w.arrivals[0] < 0.0) throw InvalidSpec("first arrival is negative");
    if (i > 0 && !(w.arrivals[i] > w.arrivals[i - 1]))
      throw InvalidSpec("arrivals not strictly increasing at index " + std::to_string(i + 1));
    if (!(w.services[i] > 0.0) || !std::isfinite(w.services[i]))
      throw InvalidSpec("service " + std::to_string(i + 1) + " is not positive");
  }
}

Workload generate_workload(const Dist& tau, const Dist& sigma, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidSpec("workload needs at least one message");
  Workload w;
  w.seed = seed;
  w.tau = tau;
  w.sigma = sigma;
  w.arrivals.reserve(n);
  w.services.reserve(n);
  CounterRng arr(seed, kArrivalStream);
  CounterRng svc(seed, kServiceStream);
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double next = t + tau.sample(arr);
    // An interarrival below one ulp of t would collapse two epochs.
    if (i > 0 && !(next > t)) next = std::nextafter(t, std::numeric_limits<double>::infinity());
    t = next;
    w.arrivals.push_back(t);
    w.services.push_back(sigma.sample(svc));
  }
  return w;
}

Workload make_workload(std::vector<double> arrivals, std::vector<double> services) {
  Workload w;
  w.arrivals = std::move(arrivals);
  w.services = std::move(services);
  validate(w);
  return w;
}

void save_workload(const Workload& w, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# seed=" << w.seed;
  if (w.tau && w.sigma) out << " tau=" << w.tau->to_record() << " sigma=" << w.sigma->to_record();
  out << "\nindex,arrival,service\n";
  for (std::size_t i = 0; i < w.size(); ++i) out << format_row(i + 1, w.arrivals[i], w.services[i]);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Workload load_workload(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Workload w;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      parse_comment(s.substr(1), w);
      continue;
    }
    if (!header_seen) {
      if (s != "index,arrival,service") throw FormatError("line " + std::to_string(lineno) + ": expected header");
      header_seen = true;
      continue;
    }
    auto c1 = s.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
    if (c2 == std::string_view::npos || s.find(',', c2 + 1) != std::string_view::npos)
      throw FormatError("line " + std::to_string(lineno) + ": expected 3 fields");
    double t = parse_number(trim(s.substr(c1 + 1, c2 - c1 - 1)), lineno);
    double x = parse_number(trim(s.substr(c2 + 1)), lineno);
    if (!w.arrivals.empty() && !(t > w.arrivals.back()))
      throw FormatError("line " + std::to_string(lineno) + ": arrivals not strictly increasing");
    if (w.arrivals.empty() && !(t >= 0.0))
      throw FormatError("line " + std::to_string(lineno) + ": negative first arrival");
    if (!(x > 0.0) || !std::isfinite(x))
      throw FormatError("line " + std::to_string(lineno) + ": service must be positive");
    w.arrivals.push_back(t);
    w.services.push_back(x);
  }
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  if (!header_seen) throw FormatError("missing header in '" + path.string() + "'");
  if (w.arrivals.empty()) throw FormatError("trace has no messages");
  return w;
}

}  // namespace aoikit
