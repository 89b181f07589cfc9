#include "aoikit/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') text = trim(text.substr(1, text.size() - 2));
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidSpec("not a number: '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view s) {
  s = trim(s);
  Int v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidSpec("not a nonnegative integer: '" + std::string(s) + "'");
  return v;
}

std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

void apply(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "tau") {
    c.tau = parse_dist_record(value);
  } else if (key == "sigma") {
    c.sigma = parse_dist_record(value);
  } else if (key == "lambda") {
    c.tau = Dist::exponential(parse_double(value));
  } else if (key == "mu") {
    c.sigma = Dist::exponential(parse_double(value));
  } else if (key == "policies" || key == "policy") {
    c.policies.clear();
    for (auto p : split_list(value)) c.policies.push_back(parse_policy(p));
    if (c.policies.empty()) throw InvalidSpec("at least one policy is required");
  } else if (key == "n_messages" || key == "n") {
    c.n_messages = parse_int<std::size_t>(value);
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(value);
  } else if (key == "replications" || key == "reps") {
    c.replications = parse_int<int>(value);
  } else if (key == "u_grid") {
    c.u_grid = parse_number_list(value);
  } else if (key == "x_grid") {
    c.x_grid = parse_number_list(value);
  } else if (key == "solver.h") {
    c.solver.h = parse_double(value);
  } else if (key == "solver.t_max") {
    c.solver.t_max = parse_double(value);
  } else if (key == "outputs" || key == "out") {
    c.outputs.clear();
    for (auto p : split_list(value)) c.outputs.emplace_back(p);
  } else if (key == "trace_in") {
    c.trace_in = std::string(trim(value));
  } else if (key == "trace_out") {
    c.trace_out = std::string(trim(value));
  } else if (key == "threads") {
    c.threads = parse_int<int>(value);
  } else if (key == "batches") {
    c.batches = parse_int<int>(value);
  } else {
    throw InvalidSpec("unknown key");
  }
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto s : split_list(text)) out.push_back(parse_double(s));
  return out;
}

void validate(const ExperimentConfig& c) {
  if (c.replications < 1) throw ConfigError("must be at least 1", 0, "replications");
  if (c.n_messages < 1) throw ConfigError("must be at least 1", 0, "n_messages");
  if (c.batches < 1) throw ConfigError("must be at least 1", 0, "batches");
  for (double u : c.u_grid)
    if (!(u > 0.0)) throw ConfigError("grid values must be positive", 0, "u_grid");
  if (c.solver.h < 0.0) throw ConfigError("must be nonnegative", 0, "solver.h");
  if (c.solver.t_max < 0.0) throw ConfigError("must be nonnegative", 0, "solver.t_max");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto hash = line.find('#');
    // '#' inside a quoted record value is not a comment.
    if (hash != std::string_view::npos && line.substr(0, hash).find('"') == std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", lineno);
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    try {
      apply(c, key, value);
    } catch (const Error& e) {
      throw ConfigError(e.what(), lineno, key);
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::string out;
  out += "tau = " + c.tau.to_record() + "\n";
  out += "sigma = " + c.sigma.to_record() + "\n";
  out += "policies = ";
  for (std::size_t i = 0; i < c.policies.size(); ++i) out += (i ? ", " : "") + c.policies[i].name();
  out += "\n";
  out += "n_messages = " + std::to_string(c.n_messages) + "\n";
  out += "seed = " + std::to_string(c.seed) + "\n";
  out += "replications = " + std::to_string(c.replications) + "\n";
  if (!c.u_grid.empty()) out += "u_grid = " + join(c.u_grid) + "\n";
  if (!c.x_grid.empty()) out += "x_grid = " + join(c.x_grid) + "\n";
  if (c.solver.h > 0.0) out += "solver.h = " + fmt(c.solver.h) + "\n";
  if (c.solver.t_max > 0.0) out += "solver.t_max = " + fmt(c.solver.t_max) + "\n";
  out += "batches = " + std::to_string(c.batches) + "\n";
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace aoikit
