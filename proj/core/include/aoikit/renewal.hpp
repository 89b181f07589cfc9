#pragma once

#include <string>
#include <vector>

#include "aoikit/dist.hpp"
#include "aoikit/volterra.hpp"

namespace aoikit {

struct SolverOptions {
  double h = 0.0;      // 0 selects E tau / 200
  double t_max = 0.0;  // 0 selects 40 max(E tau, E sigma)
  bool guard = true;   // StepTooCoarse when h > E tau / 20
};

/// Renewal-type functions of the interarrival law tau, parametrized by u.
/// All are stored right-continuous; the quantities of the theory are their
/// left limits (they count arrivals strictly before t).
struct RenewalFunctions {
  SolverGrid grid{};
  double u = 0.0;
  GridFn U;      // U = 1 + U * F
  GridFn W;      // W_u = E[e^{-u tau}; tau > t] + (e^{-ux} F) * W_u
  GridFn V;      // V_u = 1 + (e^{-ux} F) * V_u
  GridFn Q;      // Q_u = E(tau - t)^+ + (e^{-ux} F) * Q_u
  GridFn Z;      // Z = Z * F + E[tau U(t - tau)]
  GridFn UU;     // U * dU, the Stieltjes self-convolution
  GridFn M2;     // E tau^2 U + 2 E tau E[tau (U*U)(t - tau)]
  GridFn Qplus;  // E[e^{-u tau} Q_u(t - tau)]
};

RenewalFunctions renewal_functions(const Dist& tau, const Dist& sigma, double u, const SolverOptions& opts = {});

struct LaplaceResidual {
  std::string name;
  double numeric;
  double closed_form;
  double residual;  // relative
};

struct LaplaceReport {
  double xi = 0.0;
  std::vector<LaplaceResidual> rows;
  double max_residual = 0.0;
};

/// Numerically transforms U, W_u, M_2, V_u, Q_u (and Z, Q_u^+) and compares
/// with their closed-form transforms in terms of E e^{-xi tau}.
LaplaceReport laplace_checks(const RenewalFunctions& rf, const Dist& tau, double xi);

}  // namespace aoikit
