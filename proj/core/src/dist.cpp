#include "aoikit/dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <regex>

#include <json.hpp>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

constexpr double kTailMass = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const char* what) {
  if (!ok) throw InvalidSpec(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Sum_{i<k} e^{-a} a^i / i!, i.e. P(Poisson(a) < k).
double poisson_head(int k, double a) {
  if (a <= 0.0) return 1.0;
  double s = 0.0;
  double la = std::log(a);
  for (int i = 0; i < k; ++i) s += std::exp(-a + i * la - std::lgamma(i + 1.0));
  return std::min(s, 1.0);
}

double erlang_pdf(const Erlang& e, double x) {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return e.shape == 1 ? e.rate : 0.0;
  return std::exp(e.shape * std::log(e.rate) + (e.shape - 1) * std::log(x) - e.rate * x -
                  std::lgamma(static_cast<double>(e.shape)));
}

std::string fmt_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

QuadratureOptions cell_options(const QuadratureOptions& opts) {
  QuadratureOptions o = opts;
  o.tolerance = std::min(opts.tolerance, 1e-14);
  return o;
}

}  // namespace

bool Mixture::operator==(const Mixture& other) const {
  return weights == other.weights && parts == other.parts;
}

Dist Dist::exponential(double rate) {
  require(positive_finite(rate), "exponential rate must be positive and finite");
  return Dist(Exponential{rate});
}

Dist Dist::deterministic(double value) {
  require(positive_finite(value), "deterministic value must be positive and finite");
  return Dist(Deterministic{value});
}

Dist Dist::uniform(double lo, double hi) {
  require(positive_finite(lo) && std::isfinite(hi), "uniform bounds must be positive and finite");
  require(hi > lo, "uniform requires hi > lo");
  return Dist(UniformInterval{lo, hi});
}

Dist Dist::erlang(int shape, double rate) {
  require(shape >= 1, "erlang shape must be at least 1");
  require(positive_finite(rate), "erlang rate must be positive and finite");
  return Dist(Erlang{shape, rate});
}

Dist Dist::mixture(std::vector<double> weights, std::vector<Dist> parts) {
  require(!parts.empty(), "mixture needs at least one component");
  require(weights.size() == parts.size(), "mixture weights and components differ in length");
  double total = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, "mixture weights must be nonnegative");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, "mixture weights must sum to 1");
  Dist d(Mixture{std::move(weights), std::move(parts)});
  require(d.nesting_depth() <= 2, "mixture nesting depth exceeds 2");
  return d;
}

double Dist::exp_rate() const {
  if (const auto* e = std::get_if<Exponential>(&v_)) return e->rate;
  throw InvalidSpec("distribution is not exponential");
}

int Dist::nesting_depth() const {
  if (const auto* m = std::get_if<Mixture>(&v_)) {
    int d = 0;
    for (const auto& p : m->parts) d = std::max(d, p.nesting_depth());
    return d + 1;
  }
  return 0;
}

double Dist::sample(CounterRng& rng) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) { return -std::log(rng.next_open01()) / e.rate; },
          [](const Deterministic& d) { return d.value; },
          [&](const UniformInterval& u) { return u.lo + (u.hi - u.lo) * rng.next_open01(); },
          [&](const Erlang& e) {
            double s = 0.0;
            for (int i = 0; i < e.shape; ++i) s -= std::log(rng.next_open01());
            return s / e.rate;
          },
          [&](const Mixture& m) {
            double x = rng.next_open01();
            std::size_t i = 0;
            double acc = m.weights[0];
            while (x > acc && i + 1 < m.parts.size()) acc += m.weights[++i];
            return m.parts[i].sample(rng);
          },
      },
      v_);
}

double Dist::laplace(double u) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) { return e.rate / (e.rate + u); },
          [&](const Deterministic& d) { return std::exp(-u * d.value); },
          [&](const UniformInterval& r) {
            double w = r.hi - r.lo;
            if (u == 0.0) return 1.0;
            return std::exp(-u * r.lo) * -std::expm1(-u * w) / (u * w);
          },
          [&](const Erlang& e) { return std::pow(e.rate / (e.rate + u), e.shape); },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * m.parts[i].laplace(u);
            return s;
          },
      },
      v_);
}

double Dist::tilted_mean(double u) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) { return e.rate / ((e.rate + u) * (e.rate + u)); },
          [&](const Deterministic& d) { return d.value * std::exp(-u * d.value); },
          [&](const UniformInterval& r) {
            double w = r.hi - r.lo;
            if (u * w < 1e-2) {
              return adaptive_simpson([&](double x) { return x * std::exp(-u * x) / w; }, r.lo, r.hi,
                                      {.tolerance = 1e-14});
            }
            return ((r.lo / u + 1.0 / (u * u)) * std::exp(-u * r.lo) -
                    (r.hi / u + 1.0 / (u * u)) * std::exp(-u * r.hi)) /
                   w;
          },
          [&](const Erlang& e) {
            return e.shape * std::pow(e.rate / (e.rate + u), e.shape) / (e.rate + u);
          },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * m.parts[i].tilted_mean(u);
            return s;
          },
      },
      v_);
}

double Dist::moment(int p) const {
  if (p != 1 && p != 2) throw InvalidSpec("moment order must be 1 or 2");
  return std::visit(
      overloaded{
          [&](const Exponential& e) { return p == 1 ? 1.0 / e.rate : 2.0 / (e.rate * e.rate); },
          [&](const Deterministic& d) { return p == 1 ? d.value : d.value * d.value; },
          [&](const UniformInterval& r) {
            return p == 1 ? 0.5 * (r.lo + r.hi) : (r.lo * r.lo + r.lo * r.hi + r.hi * r.hi) / 3.0;
          },
          [&](const Erlang& e) {
            double k = e.shape;
            return p == 1 ? k / e.rate : k * (k + 1.0) / (e.rate * e.rate);
          },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * m.parts[i].moment(p);
            return s;
          },
      },
      v_);
}

double Dist::sf(double x) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.rate * x); },
          [&](const Deterministic& d) { return x < d.value ? 1.0 : 0.0; },
          [&](const UniformInterval& r) { return std::clamp((r.hi - x) / (r.hi - r.lo), 0.0, 1.0); },
          [&](const Erlang& e) { return x <= 0.0 ? 1.0 : poisson_head(e.shape, e.rate * x); },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * m.parts[i].sf(x);
            return s;
          },
      },
      v_);
}

double Dist::cdf(double x) const { return 1.0 - sf(x); }

double Dist::sf_incl(double x) const {
  double s = sf(x);
  for (const auto& [at, mass] : atoms())
    if (at == x) s += mass;
  return s;
}

double Dist::excess(double t) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) {
            return t <= 0.0 ? 1.0 / e.rate - t : std::exp(-e.rate * t) / e.rate;
          },
          [&](const Deterministic& d) { return std::max(d.value - t, 0.0); },
          [&](const UniformInterval& r) {
            if (t <= r.lo) return 0.5 * (r.lo + r.hi) - t;
            if (t >= r.hi) return 0.0;
            return (r.hi - t) * (r.hi - t) / (2.0 * (r.hi - r.lo));
          },
          [&](const Erlang& e) {
            if (t <= 0.0) return e.shape / e.rate - t;
            double a = e.rate * t;
            double la = std::log(a);
            double s = 0.0;
            for (int j = 0; j < e.shape; ++j)
              s += (e.shape - j) * std::exp(-a + j * la - std::lgamma(j + 1.0));
            return s / e.rate;
          },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * m.parts[i].excess(t);
            return s;
          },
      },
      v_);
}

double Dist::partial_laplace_above(double u, double t) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) {
            double base = e.rate / (e.rate + u);
            return t <= 0.0 ? base : base * std::exp(-(e.rate + u) * t);
          },
          [&](const Deterministic& d) { return t < d.value ? std::exp(-u * d.value) : 0.0; },
          [&](const UniformInterval& r) {
            double a = std::max(t, r.lo);
            if (a >= r.hi) return 0.0;
            double w = r.hi - r.lo;
            if (u == 0.0) return (r.hi - a) / w;
            return std::exp(-u * a) * -std::expm1(-u * (r.hi - a)) / (u * w);
          },
          [&](const Erlang& e) {
            double base = std::pow(e.rate / (e.rate + u), e.shape);
            return t <= 0.0 ? base : base * poisson_head(e.shape, (e.rate + u) * t);
          },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i)
              s += m.weights[i] * m.parts[i].partial_laplace_above(u, t);
            return s;
          },
      },
      v_);
}

double Dist::upper_quantile(double eps) const {
  if (const auto* e = std::get_if<Exponential>(&v_)) return -std::log(eps) / e->rate;
  if (const auto* d = std::get_if<Deterministic>(&v_)) return d->value;
  if (const auto* r = std::get_if<UniformInterval>(&v_)) return r->hi - eps * (r->hi - r->lo);
  double hi = std::max(mean(), 1e-300);
  while (sf(hi) > eps) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (sf(mid) > eps ? lo : hi) = mid;
  }
  return hi;
}

std::vector<std::pair<double, double>> Dist::atoms() const {
  std::vector<std::pair<double, double>> out;
  if (const auto* d = std::get_if<Deterministic>(&v_)) {
    out.emplace_back(d->value, 1.0);
  } else if (const auto* m = std::get_if<Mixture>(&v_)) {
    for (std::size_t i = 0; i < m->parts.size(); ++i) {
      for (auto [x, p] : m->parts[i].atoms()) {
        auto it = std::find_if(out.begin(), out.end(), [x = x](const auto& a) { return a.first == x; });
        if (it == out.end())
          out.emplace_back(x, m->weights[i] * p);
        else
          it->second += m->weights[i] * p;
      }
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

bool Dist::is_atomic() const {
  if (std::holds_alternative<Deterministic>(v_)) return true;
  if (const auto* m = std::get_if<Mixture>(&v_)) {
    for (std::size_t i = 0; i < m->parts.size(); ++i)
      if (m->weights[i] > 0.0 && !m->parts[i].is_atomic()) return false;
    return true;
  }
  return false;
}

std::vector<double> Dist::breakpoints() const {
  std::vector<double> out = std::visit(
      overloaded{
          [](const Exponential&) { return std::vector<double>{0.0}; },
          [](const Deterministic& d) { return std::vector<double>{d.value}; },
          [](const UniformInterval& r) { return std::vector<double>{r.lo, r.hi}; },
          [](const Erlang&) { return std::vector<double>{0.0}; },
          [](const Mixture& m) {
            std::vector<double> all;
            for (const auto& p : m.parts) {
              auto b = p.breakpoints();
              all.insert(all.end(), b.begin(), b.end());
            }
            return all;
          },
      },
      v_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Dist::expect(const std::function<double(double)>& f, std::span<const double> extra_breaks,
                    const QuadratureOptions& opts) const {
  return expect(f, f, extra_breaks, opts);
}

double Dist::expect(const std::function<double(double)>& f, const std::function<double(double)>& at_atom,
                    std::span<const double> extra_breaks, const QuadratureOptions& opts) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) {
            double q = upper_quantile(kTailMass);
            return adaptive_simpson_split([&](double x) { return f(x) * e.rate * std::exp(-e.rate * x); },
                                          0.0, q, extra_breaks, opts);
          },
          [&](const Deterministic& d) { return at_atom(d.value); },
          [&](const UniformInterval& r) {
            double w = r.hi - r.lo;
            return adaptive_simpson_split([&](double x) { return f(x) / w; }, r.lo, r.hi, extra_breaks, opts);
          },
          [&](const Erlang& e) {
            double q = upper_quantile(kTailMass);
            return adaptive_simpson_split([&](double x) { return f(x) * erlang_pdf(e, x); }, 0.0, q,
                                          extra_breaks, opts);
          },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i)
              if (m.weights[i] > 0.0) s += m.weights[i] * m.parts[i].expect(f, at_atom, extra_breaks, opts);
            return s;
          },
      },
      v_);
}

double Dist::expect_on(const std::function<double(double)>& f, double a, double b,
                       const QuadratureOptions& opts) const {
  if (!(b > a)) return 0.0;
  QuadratureOptions o = cell_options(opts);
  return std::visit(
      overloaded{
          [&](const Exponential& e) {
            double lo = std::max(a, 0.0);
            double hi = std::isfinite(b) ? b : std::max(lo, upper_quantile(kTailMass));
            if (hi <= lo) return 0.0;
            return adaptive_simpson([&](double x) { return f(x) * e.rate * std::exp(-e.rate * x); }, lo, hi, o);
          },
          [&](const Deterministic& d) { return (a < d.value && d.value <= b) ? f(d.value) : 0.0; },
          [&](const UniformInterval& r) {
            double lo = std::max(a, r.lo);
            double hi = std::min(b, r.hi);
            if (hi <= lo) return 0.0;
            double w = r.hi - r.lo;
            return adaptive_simpson([&](double x) { return f(x) / w; }, lo, hi, o);
          },
          [&](const Erlang& e) {
            double lo = std::max(a, 0.0);
            double hi = std::isfinite(b) ? b : std::max(lo, upper_quantile(kTailMass));
            if (hi <= lo) return 0.0;
            return adaptive_simpson([&](double x) { return f(x) * erlang_pdf(e, x); }, lo, hi, o);
          },
          [&](const Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.parts.size(); ++i)
              if (m.weights[i] > 0.0) s += m.weights[i] * m.parts[i].expect_on(f, a, b, opts);
            return s;
          },
      },
      v_);
}

std::string Dist::to_record() const {
  return std::visit(
      overloaded{
          [](const Exponential& e) { return "{kind:\"exp\", rate:" + fmt_double(e.rate) + "}"; },
          [](const Deterministic& d) { return "{kind:\"det\", value:" + fmt_double(d.value) + "}"; },
          [](const UniformInterval& r) {
            return "{kind:\"uniform\", lo:" + fmt_double(r.lo) + ", hi:" + fmt_double(r.hi) + "}";
          },
          [](const Erlang& e) {
            return "{kind:\"erlang\", shape:" + std::to_string(e.shape) + ", rate:" + fmt_double(e.rate) + "}";
          },
          [](const Mixture& m) {
            std::string w;
            std::string p;
            for (std::size_t i = 0; i < m.parts.size(); ++i) {
              if (i) {
                w += ", ";
                p += ", ";
              }
              w += fmt_double(m.weights[i]);
              p += m.parts[i].to_record();
            }
            return "{kind:\"mixture\", weights:[" + w + "], parts:[" + p + "]}";
          },
      },
      v_);
}

namespace {

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError("missing key in distribution record", 0, key);
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("expected a number", 0, key);
  return v.get<double>();
}

Dist from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("distribution record must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("distribution record needs a string kind", 0, "kind");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "exp" || kind == "exponential") return Dist::exponential(number_field(j, "rate"));
  if (kind == "det" || kind == "deterministic") return Dist::deterministic(number_field(j, "value"));
  if (kind == "uniform") return Dist::uniform(number_field(j, "lo"), number_field(j, "hi"));
  if (kind == "erlang") {
    double k = number_field(j, "shape");
    if (k != std::floor(k) || k < 1 || k > 1e6) throw ConfigError("shape must be a positive integer", 0, "shape");
    return Dist::erlang(static_cast<int>(k), number_field(j, "rate"));
  }
  if (kind == "mixture") {
    if (!j.contains("weights") || !j.at("weights").is_array()) throw ConfigError("expected a list", 0, "weights");
    if (!j.contains("parts") || !j.at("parts").is_array()) throw ConfigError("expected a list", 0, "parts");
    std::vector<double> w;
    for (const auto& x : j.at("weights")) {
      if (!x.is_number()) throw ConfigError("expected a number", 0, "weights");
      w.push_back(x.get<double>());
    }
    std::vector<Dist> parts;
    for (const auto& p : j.at("parts")) parts.push_back(from_json(p));
    return Dist::mixture(std::move(w), std::move(parts));
  }
  throw ConfigError("unknown distribution kind '" + kind + "'", 0, "kind");
}

}  // namespace

Dist parse_dist_record(std::string_view text) {
  static const std::regex bare_key(R"(([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:)");
  std::string quoted = std::regex_replace(std::string(text), bare_key, "$1\"$2\":");
  nlohmann::json j = nlohmann::json::parse(quoted, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed distribution record: " + std::string(text));
  return from_json(j);
}

CrossMoments cross_moments_quadrature(const Dist& tau, const Dist& sigma, const QuadratureOptions& opts) {
  std::vector<double> breaks = tau.breakpoints();
  auto sb = sigma.breakpoints();
  breaks.insert(breaks.end(), sb.begin(), sb.end());
  double upper = std::min(tau.upper_quantile(kTailMass), sigma.upper_quantile(kTailMass));
  CrossMoments cm{};
  cm.e_min = adaptive_simpson_split([&](double x) { return tau.sf(x) * sigma.sf(x); }, 0.0, upper, breaks, opts);
  auto tb = tau.breakpoints();
  cm.e_pos = sigma.expect([&](double s) { return tau.excess(s); }, tb, opts);
  cm.p_ge = sigma.expect([&](double s) { return tau.sf_incl(s); }, tb, opts);
  return cm;
}

CrossMoments cross_moments(const Dist& tau, const Dist& sigma, const QuadratureOptions& opts) {
  CrossMoments cm{};
  if (sigma.is_exponential()) {
    double mu = sigma.exp_rate();
    double l = tau.laplace(mu);
    cm.p_ge = 1.0 - l;
    cm.e_min = (1.0 - l) / mu;
    cm.e_pos = tau.mean() - cm.e_min;
  } else if (tau.is_exponential()) {
    double lam = tau.exp_rate();
    double l = sigma.laplace(lam);
    cm.p_ge = l;
    cm.e_min = (1.0 - l) / lam;
    cm.e_pos = l / lam;
  } else if (const auto* d = std::get_if<Deterministic>(&tau.variant())) {
    cm.p_ge = sigma.cdf(d->value);
    cm.e_min = sigma.mean() - sigma.excess(d->value);
    cm.e_pos = d->value - cm.e_min;
  } else if (const auto* d = std::get_if<Deterministic>(&sigma.variant())) {
    cm.p_ge = tau.sf_incl(d->value);
    cm.e_pos = tau.excess(d->value);
    cm.e_min = tau.mean() - cm.e_pos;
  } else {
    return cross_moments_quadrature(tau, sigma, opts);
  }
  return cm;
}

}  // namespace aoikit
