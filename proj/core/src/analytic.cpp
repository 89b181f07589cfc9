#include "aoikit/analytic.hpp"

#include <cmath>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

constexpr double kRhoLimitBand = 1e-6;
constexpr double kRateLimitBand = 1e-6;

Route resolve(const Model& m, Route r) {
  switch (r) {
    case Route::Auto:
      if (m.tau.is_exponential()) return Route::MGI;
      if (m.sigma.is_exponential()) return Route::GIM;
      return Route::General;
    case Route::MGI:
      if (!m.tau.is_exponential()) throw InvalidSpec("M/GI formulas need exponential interarrivals");
      return r;
    case Route::GIM:
      if (!m.sigma.is_exponential()) throw InvalidSpec("GI/M formulas need exponential services");
      return r;
    case Route::General:
      return r;
  }
  return r;
}

void require_positive(double u) {
  if (!(u > 0.0)) throw InvalidSpec("transform argument u must be positive");
}

AnalyticResult closed(double v, Route r) {
  return {v, r == Route::MGI ? "closed-form:M/GI" : "closed-form:GI/M", 0.0, 0.0};
}

// Expectations of renewal functions at sigma, with left limits at atoms.
struct BlockingTerms {
  double eu, ew, ev, eq, eqplus, ez, em2;
  SolverGrid grid;
};

BlockingTerms blocking_terms(const Model& m, double u, const SolverOptions& opts) {
  RenewalFunctions rf = renewal_functions(m.tau, m.sigma, u, opts);
  BlockingTerms t{};
  t.eu = expect_grid(m.sigma, rf.U);
  t.ew = expect_grid(m.sigma, rf.W);
  t.ev = expect_grid(m.sigma, rf.V);
  t.eq = expect_grid(m.sigma, rf.Q);
  t.eqplus = expect_grid(m.sigma, rf.Qplus);
  t.ez = expect_grid(m.sigma, rf.Z);
  t.em2 = expect_grid(m.sigma, rf.M2);
  t.grid = rf.grid;
  return t;
}

AnalyticResult renewal_result(double v, const SolverGrid& g) { return {v, "renewal", g.h, g.t_max()}; }

// E[e^{-u tau}; tau < sigma] and E[e^{-u tau}; tau >= sigma] by quadrature.
double discounted_tau_below_sigma(const Model& m, double u) {
  auto bps = m.sigma.breakpoints();
  return m.tau.expect([&](double t) { return std::exp(-u * t) * m.sigma.sf(t); }, bps);
}

double discounted_tau_above_sigma(const Model& m, double u) {
  auto bps = m.sigma.breakpoints();
  return m.tau.expect([&](double t) { return std::exp(-u * t) * m.sigma.cdf(t); }, bps);
}

double pushout_mean(const Model& m, Measure meas, Route r) {
  const double et = m.tau.mean();
  const double residual = m.tau.moment(2) / (2.0 * et);
  if (r == Route::MGI) {
    const double lam = m.tau.exp_rate();
    const double base = 1.0 / (lam * m.sigma.laplace(lam));
    return meas == Measure::AoI ? base : base - 1.0 / lam;
  }
  if (r == Route::GIM) {
    const double mu = m.sigma.exp_rate();
    return meas == Measure::AoI ? residual + 1.0 / mu : 1.0 / mu;
  }
  CrossMoments cm = cross_moments_quadrature(m.tau, m.sigma);
  const double reading = cm.e_min / cm.p_ge;
  return meas == Measure::AoI ? residual + reading : reading;
}

double pushout_lt_aoi(const Model& m, double u, Route r) {
  if (r == Route::MGI) {
    const double lam = m.tau.exp_rate();
    const double l = m.sigma.laplace(lam + u);
    return lam * l / (u + lam * l);
  }
  const double et = m.tau.mean();
  const double front = (1.0 - m.tau.laplace(u)) / (u * et);
  if (r == Route::GIM) {
    const double mu = m.sigma.exp_rate();
    return front * mu / (u + mu);
  }
  auto tb = m.tau.breakpoints();
  const double j1 = m.sigma.expect([&](double s) { return std::exp(-u * s) * m.tau.sf_incl(s); }, tb);
  const double j2 = discounted_tau_below_sigma(m, u);
  return front * j1 / (1.0 - j2);
}

double pushout_atom(const Model& m, Route r) {
  if (r == Route::MGI) return m.sigma.laplace(m.tau.exp_rate());
  if (r == Route::GIM) {
    const double mu = m.sigma.exp_rate();
    const double et = m.tau.mean();
    return (mu * et - 1.0 + m.tau.laplace(mu)) / (mu * et);
  }
  return cross_moments_quadrature(m.tau, m.sigma).e_pos / m.tau.mean();
}

double pushout_lt_naoi(const Model& m, double u, Route r) {
  if (r == Route::MGI) {
    const double lam = m.tau.exp_rate();
    return 1.0 - u * (1.0 - m.sigma.laplace(lam)) / (u + lam * m.sigma.laplace(lam + u));
  }
  const double et = m.tau.mean();
  if (r == Route::GIM) {
    const double mu = m.sigma.exp_rate();
    return 1.0 - (1.0 - m.tau.laplace(mu)) / (mu * et) * (1.0 - m.tau.laplace(u)) / (1.0 - m.tau.laplace(u + mu));
  }
  CrossMoments cm = cross_moments_quadrature(m.tau, m.sigma);
  const double k1 = discounted_tau_above_sigma(m, u);
  const double k2 = discounted_tau_below_sigma(m, u);
  return cm.e_pos / et + (cm.e_min / et) * k1 / (1.0 - k2);
}

}  // namespace

void validate(const Model& m) {
  if (!(cross_moments(m.tau, m.sigma).p_ge > 0.0)) throw InvalidSpec("model needs P(tau >= sigma) > 0");
}

const char* to_string(Discipline d) { return d == Discipline::Pushout ? "pushout" : "blocking"; }
const char* to_string(Measure m) { return m == Measure::AoI ? "aoi" : "naoi"; }

AnalyticResult mean(const Model& m, Discipline d, Measure meas, const AnalyticOptions& opts) {
  validate(m);
  const Route r = resolve(m, opts.route);
  if (d == Discipline::Pushout) {
    double v = pushout_mean(m, meas, r);
    return r == Route::General ? AnalyticResult{v, "quadrature", 0.0, 0.0} : closed(v, r);
  }
  const double es = m.sigma.mean();
  if (r == Route::MGI) {
    const double lam = m.tau.exp_rate();
    const double extra = 0.5 * lam * m.sigma.moment(2) / (1.0 + lam * es);
    return closed(meas == Measure::AoI ? es + 1.0 / lam + extra : es + extra, r);
  }
  if (r == Route::GIM) {
    const double mu = m.sigma.exp_rate();
    const double tail = m.tau.tilted_mean(mu) / (1.0 - m.tau.laplace(mu));
    const double et = m.tau.mean();
    return closed(meas == Measure::AoI ? 1.0 / mu + m.tau.moment(2) / (2.0 * et) + tail : 1.0 / mu + tail, r);
  }
  BlockingTerms t = blocking_terms(m, 1.0, opts.solver);
  const double v = meas == Measure::AoI ? es + t.em2 / (2.0 * m.tau.mean() * t.eu) : es + t.ez / t.eu;
  return renewal_result(v, t.grid);
}

AnalyticResult lt_aoi(const Model& m, Discipline d, double u, const AnalyticOptions& opts) {
  require_positive(u);
  validate(m);
  const Route r = resolve(m, opts.route);
  if (d == Discipline::Pushout) {
    double v = pushout_lt_aoi(m, u, r);
    return r == Route::General ? AnalyticResult{v, "quadrature", 0.0, 0.0} : closed(v, r);
  }
  const double ls = m.sigma.laplace(u);
  if (r == Route::MGI) {
    const double lam = m.tau.exp_rate();
    const double es = m.sigma.mean();
    return closed(lam / (1.0 + lam * es) * (u + lam - lam * ls) * ls / (u * (u + lam)), r);
  }
  if (r == Route::GIM) {
    const double mu = m.sigma.exp_rate();
    const double lm = m.tau.laplace(mu);
    return closed(mu / ((mu + u) * u * m.tau.mean()) * (1.0 - lm) * (1.0 - m.tau.laplace(u)) /
                      (1.0 - m.tau.laplace(mu + u)),
                  r);
  }
  BlockingTerms t = blocking_terms(m, u, opts.solver);
  return renewal_result(ls * (1.0 - t.ew) / (u * m.tau.mean() * t.eu), t.grid);
}

AnalyticResult naoi_atom(const Model& m, Discipline d, const AnalyticOptions& opts) {
  validate(m);
  const Route r = resolve(m, opts.route);
  if (d == Discipline::Pushout) {
    double v = pushout_atom(m, r);
    return r == Route::General ? AnalyticResult{v, "quadrature", 0.0, 0.0} : closed(v, r);
  }
  if (r == Route::MGI) {
    const double lam = m.tau.exp_rate();
    return closed(m.sigma.laplace(lam) / (1.0 + lam * m.sigma.mean()), r);
  }
  if (r == Route::GIM) {
    const double mu = m.sigma.exp_rate();
    const double et = m.tau.mean();
    const double lm = m.tau.laplace(mu);
    return closed((1.0 - lm) * (mu * et - 1.0 + lm) / (mu * et), r);
  }
  BlockingTerms t = blocking_terms(m, 1.0, opts.solver);
  const double e_pos = cross_moments_quadrature(m.tau, m.sigma).e_pos;
  return renewal_result(e_pos / (m.tau.mean() * t.eu), t.grid);
}

double blocking_gim_atom_printed(const Model& m) {
  const double mu = m.sigma.exp_rate();
  const double et = m.tau.mean();
  const double lm = m.tau.laplace(mu);
  return (1.0 - lm) * (mu * et - 1.0 - lm) / (mu * et);
}

AnalyticResult lt_naoi(const Model& m, Discipline d, double u, const AnalyticOptions& opts) {
  require_positive(u);
  validate(m);
  const Route r = resolve(m, opts.route);
  if (d == Discipline::Pushout) {
    double v = pushout_lt_naoi(m, u, r);
    return r == Route::General ? AnalyticResult{v, "quadrature", 0.0, 0.0} : closed(v, r);
  }
  if (r == Route::General) {
    BlockingTerms t = blocking_terms(m, u, opts.solver);
    const double et = m.tau.mean();
    const double atom = cross_moments_quadrature(m.tau, m.sigma).e_pos / (et * t.eu);
    const double positive = (t.ew * (et * t.ev - t.eq) + t.eqplus) / (et * t.eu);
    return renewal_result(atom + positive, t.grid);
  }
  const double atom = naoi_atom(m, d, {r, opts.solver}).value;
  if (r == Route::MGI) {
    const double lam = m.tau.exp_rate();
    const double scale = lam / (1.0 + lam * m.sigma.mean());
    const double ll = m.sigma.laplace(lam);
    double positive = 0.0;
    if (std::abs(u - lam) < kRateLimitBand * lam) {
      const double tilted = m.sigma.tilted_mean(lam);
      const double eh = (2.0 * (1.0 - ll) - lam * tilted) / lam;
      positive = scale * (0.5 * ll * eh + tilted);
    } else {
      const double lu = m.sigma.laplace(u);
      positive = scale * (lu / (lam + u) * (lam * lam * (1.0 - lu) - u * u * (1.0 - ll)) / (u * (lam - u)) +
                          (lu - ll) / (lam - u));
    }
    return closed(atom + positive, r);
  }
  const double mu = m.sigma.exp_rate();
  const double et = m.tau.mean();
  const double lm = m.tau.laplace(mu);
  const double lum = m.tau.laplace(u + mu);
  const double ew = (m.tau.laplace(u) - lum) / (1.0 - lum);
  const double positive = (1.0 - lm) / (mu * et * (1.0 - lum)) * (ew * (1.0 - lm) + lum * (mu * et - 1.0 + lm));
  return closed(atom + positive, r);
}

double zeta_density(double rho, double t) {
  if (t < 0.0) return 0.0;
  if (std::abs(rho - 1.0) < kRhoLimitBand) return (t * t + 2.0 * t + 2.0) * std::exp(-t) / 6.0;
  const double c = rho * rho - 3.0 * rho + 1.0 + rho * rho * (rho - 1.0) * t;
  return (rho * std::exp(-rho * t) + c * std::exp(-t)) / ((rho + 2.0) * (rho - 1.0) * (rho - 1.0));
}

double zeta_laplace(double rho, double u) {
  return (u * u + (2.0 * rho + 1.0) * u + rho * (rho + 2.0)) / ((rho + 2.0) * (u + rho) * (u + 1.0) * (u + 1.0));
}

double mm_pushout_aoi_cdf(double lambda, double mu, double x) {
  if (x <= 0.0) return 0.0;
  if (std::abs(lambda - mu) < 1e-9 * mu) return 1.0 - std::exp(-lambda * x) * (1.0 + lambda * x);
  return 1.0 - (mu * std::exp(-lambda * x) - lambda * std::exp(-mu * x)) / (mu - lambda);
}

double fifo_mean_aoi_mm(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidSpec("rates must be positive");
  if (lambda >= mu) throw Unstable("FIFO queue is unstable for lambda >= mu");
  return 1.0 / lambda + 1.0 / mu + (lambda * lambda / (mu * mu)) / (mu - lambda);
}

double crossover(const std::function<Model(double)>& family, Measure meas, double lo, double hi, double tol,
                 const AnalyticOptions& opts) {
  auto gap = [&](double lam) {
    Model m = family(lam);
    return mean(m, Discipline::Pushout, meas, opts).value - mean(m, Discipline::Blocking, meas, opts).value;
  };
  double glo = gap(lo);
  double ghi = gap(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) throw NoSignChange("pushout and blocking means do not cross in the bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double g = gap(mid);
    if ((g > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace aoikit
