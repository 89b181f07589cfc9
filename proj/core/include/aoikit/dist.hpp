#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "aoikit/quadrature.hpp"
#include "aoikit/rng.hpp"

namespace aoikit {

class Dist;

struct Exponential {
  double rate;
  bool operator==(const Exponential&) const = default;
};

struct Deterministic {
  double value;
  bool operator==(const Deterministic&) const = default;
};

struct UniformInterval {
  double lo;
  double hi;
  bool operator==(const UniformInterval&) const = default;
};

struct Erlang {
  int shape;
  double rate;
  bool operator==(const Erlang&) const = default;
};

struct Mixture {
  std::vector<double> weights;
  std::vector<Dist> parts;
  bool operator==(const Mixture& other) const;
};

/// Law of a positive random variable (interarrival or service time).
///
/// Every family carries an exact Laplace transform, first two moments and
/// CDF, so the analytic engine never needs sampling. Values are immutable
/// and validated on construction.
class Dist {
 public:
  using Variant = std::variant<Exponential, Deterministic, UniformInterval, Erlang, Mixture>;

  static Dist exponential(double rate);
  static Dist deterministic(double value);
  static Dist uniform(double lo, double hi);
  static Dist erlang(int shape, double rate);
  static Dist mixture(std::vector<double> weights, std::vector<Dist> parts);

  const Variant& variant() const { return v_; }
  bool is_exponential() const { return std::holds_alternative<Exponential>(v_); }
  bool is_deterministic() const { return std::holds_alternative<Deterministic>(v_); }
  /// Rate of an Exponential law; throws InvalidSpec otherwise.
  double exp_rate() const;

  double sample(CounterRng& rng) const;

  /// E e^{-uX}, u >= 0.
  double laplace(double u) const;
  /// E[X e^{-uX}] (minus the derivative of the transform).
  double tilted_mean(double u) const;
  /// E X^p for p in {1, 2}.
  double moment(int p) const;
  double mean() const { return moment(1); }

  double cdf(double x) const;      // P(X <= x)
  double sf(double x) const;       // P(X > x)
  double sf_incl(double x) const;  // P(X >= x)
  /// E (X - x)^+.
  double excess(double x) const;
  /// E[e^{-uX}; X > t].
  double partial_laplace_above(double u, double t) const;

  /// Smallest x (found by bisection for non-closed forms) with P(X > x) <= eps.
  double upper_quantile(double eps) const;

  /// Point masses as (location, probability).
  std::vector<std::pair<double, double>> atoms() const;
  bool is_atomic() const;
  /// Points where the density or CDF is non-smooth.
  std::vector<double> breakpoints() const;
  int nesting_depth() const;

  /// E f(X). The continuous part is integrated by adaptive Simpson over the
  /// support (truncated at the 1 - 1e-10 quantile), split at the law's own
  /// breakpoints and at `extra_breaks`; atoms are summed exactly.
  double expect(const std::function<double(double)>& f, std::span<const double> extra_breaks = {},
                const QuadratureOptions& opts = {}) const;

  /// Same, but evaluates `at_atom` instead of f at the point masses (used to
  /// take left limits of left-continuous integrands).
  double expect(const std::function<double(double)>& f, const std::function<double(double)>& at_atom,
                std::span<const double> extra_breaks, const QuadratureOptions& opts = {}) const;

  /// E[f(X); a < X <= b].
  double expect_on(const std::function<double(double)>& f, double a, double b,
                   const QuadratureOptions& opts = {}) const;

  /// Tagged-record text, e.g. {kind:"exp", rate:1}.
  std::string to_record() const;

  bool operator==(const Dist& other) const { return v_ == other.v_; }

 private:
  explicit Dist(Variant v) : v_(std::move(v)) {}

  Variant v_;
};

/// Parses a tagged record such as {kind:"mixture", weights:[0.5,0.5], parts:[...]}.
/// Keys may be bare identifiers. Throws ConfigError on malformed input and
/// InvalidSpec on parameter violations.
Dist parse_dist_record(std::string_view text);

/// Mean and probability quantities of the pair (tau, sigma), tau and sigma independent.
struct CrossMoments {
  double e_min;  // E[tau ^ sigma]
  double p_ge;   // P(tau >= sigma)
  double e_pos;  // E[(tau - sigma)^+]
};

/// Analytic shortcut when either law is Exponential or Deterministic,
/// adaptive quadrature over the CDFs otherwise.
CrossMoments cross_moments(const Dist& tau, const Dist& sigma, const QuadratureOptions& opts = {});

/// Always uses quadrature (the independent route for the shortcut formulas).
CrossMoments cross_moments_quadrature(const Dist& tau, const Dist& sigma,
                                      const QuadratureOptions& opts = {});

}  // namespace aoikit
