#pragma once

#include <functional>
#include <string>

#include "aoikit/dist.hpp"
#include "aoikit/renewal.hpp"

namespace aoikit {

struct Model {
  Dist tau;
  Dist sigma;
};

/// Throws InvalidSpec unless P(tau >= sigma) > 0.
void validate(const Model& m);

enum class Discipline { Pushout, Blocking };
enum class Measure { AoI, NAoI };

/// Which family of formulas evaluates a quantity. Auto picks the M/GI forms
/// when tau is exponential, the GI/M forms when sigma is, and the general
/// (quadrature / renewal) forms otherwise. Forcing a route lets the routes be
/// compared against each other on models where several apply.
enum class Route { Auto, MGI, GIM, General };

struct AnalyticOptions {
  Route route = Route::Auto;
  SolverOptions solver;
};

struct AnalyticResult {
  double value = 0.0;
  std::string method;  // "closed-form:M/GI", "closed-form:GI/M", "quadrature", "renewal"
  double h = 0.0;      // grid step of the renewal route, 0 otherwise
  double t_max = 0.0;
};

const char* to_string(Discipline d);
const char* to_string(Measure m);

/// Stationary (time-average) mean of AoI or NAoI.
AnalyticResult mean(const Model& m, Discipline d, Measure meas, const AnalyticOptions& opts = {});

/// Stationary E e^{-u alpha}, u > 0.
AnalyticResult lt_aoi(const Model& m, Discipline d, double u, const AnalyticOptions& opts = {});

/// Stationary E e^{-u beta} including the atom at 0, u > 0.
AnalyticResult lt_naoi(const Model& m, Discipline d, double u, const AnalyticOptions& opts = {});

/// Stationary P(beta = 0).
AnalyticResult naoi_atom(const Model& m, Discipline d, const AnalyticOptions& opts = {});

/// Alternative form of the GI/M blocking atom written with
/// "mu E tau - 1 - E e^{-mu tau}". It disagrees with naoi_atom (-0.25 vs 0.25
/// at M/M) and exists only so that disagreement can be reported.
double blocking_gim_atom_printed(const Model& m);

/// Density of mu*zeta, the positive part of the M/M blocking NAoI, for
/// rho = lambda/mu. Uses the exact limit form when |rho - 1| < 1e-6.
double zeta_density(double rho, double t);
/// E e^{-u mu zeta}.
double zeta_laplace(double rho, double u);

/// CDF of Exp(lambda) + Exp(mu), the M/M pushout AoI law.
double mm_pushout_aoi_cdf(double lambda, double mu, double x);

/// Mean AoI of the M/M/1 FIFO queue. Throws Unstable when lambda >= mu.
double fifo_mean_aoi_mm(double lambda, double mu);

/// Bisection root (to `tol` in lambda) of mean_Pushout - mean_Blocking over a
/// model family. Throws NoSignChange if the difference has equal signs at the ends.
double crossover(const std::function<Model(double)>& family, Measure meas, double lo, double hi, double tol = 1e-3,
                 const AnalyticOptions& opts = {});

}  // namespace aoikit
