#include "aoikit/renewal.hpp"

#include <algorithm>
#include <cmath>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

GridFn combine(double ca, const GridFn& a, double cb, const GridFn& b) {
  std::vector<double> v(a.size());
  std::vector<double> l(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    v[k] = ca * a.values()[k] + cb * b.values()[k];
    l[k] = ca * a.lefts()[k] + cb * b.lefts()[k];
  }
  return GridFn(a.h(), std::move(v), std::move(l));
}

// (U*U)(t) = int_{[0,t]} U(t - x) dU(x), with the unit jump of U at 0.
GridFn self_convolve(const GridFn& u, bool lattice) {
  const std::size_t n = u.size() - 1;
  const auto& v = u.values();
  const auto& l = u.lefts();
  std::vector<double> out(n + 1, 0.0);
  if (lattice) {
    std::vector<double> out_left(n + 1, 0.0);
    std::vector<double> jump(n + 1);
    jump[0] = v[0];
    for (std::size_t j = 1; j <= n; ++j) jump[j] = v[j] - l[j];
    for (std::size_t k = 0; k <= n; ++k) {
      double s = 0.0;
      double sl = 0.0;
      for (std::size_t j = 0; j <= k; ++j) {
        if (jump[j] == 0.0) continue;
        s += jump[j] * v[k - j];
        if (j < k) sl += jump[j] * l[k - j];
      }
      out[k] = s;
      out_left[k] = k == 0 ? s : sl;
    }
    return GridFn(u.h(), std::move(out), std::move(out_left));
  }
  for (std::size_t k = 0; k <= n; ++k) {
    double s = v[0] * v[k];
    for (std::size_t j = 1; j <= k; ++j) s += (v[j] - v[j - 1]) * 0.5 * (v[k - j] + v[k - j + 1]);
    out[k] = s;
  }
  return GridFn(u.h(), std::move(out));
}

}  // namespace

RenewalFunctions renewal_functions(const Dist& tau, const Dist& sigma, double u, const SolverOptions& opts) {
  if (!(u >= 0.0)) throw InvalidSpec("u must be nonnegative");
  const double h = opts.h > 0.0 ? opts.h : default_step(tau);
  const double t_max = opts.t_max > 0.0 ? opts.t_max : default_horizon(tau, sigma);
  RenewalFunctions rf;
  rf.u = u;
  rf.grid = choose_grid(tau, h, t_max, opts.guard);
  const SolverGrid& g = rf.grid;

  Kernel plain(tau, [](double) { return 1.0; }, g);
  Kernel discounted(tau, [u](double x) { return std::exp(-u * x); }, g);
  Kernel moment(tau, [](double x) { return x; }, g);

  rf.U = plain.solve(sample_forcing([](double) { return 1.0; }, g));
  rf.W = discounted.solve(sample_forcing([&](double t) { return tau.partial_laplace_above(u, t); }, g));
  rf.V = discounted.solve(sample_forcing([](double) { return 1.0; }, g));
  rf.Q = discounted.solve(sample_forcing([&](double t) { return tau.excess(t); }, g));
  rf.Z = plain.solve(moment.convolve(rf.U));
  rf.UU = self_convolve(rf.U, g.lattice);
  rf.M2 = combine(tau.moment(2), rf.U, 2.0 * tau.mean(), moment.convolve(rf.UU));
  rf.Qplus = discounted.convolve(rf.Q);
  return rf;
}

LaplaceReport laplace_checks(const RenewalFunctions& rf, const Dist& tau, double xi) {
  if (!(xi > 0.0)) throw InvalidSpec("xi must be positive");
  const double u = rf.u;
  const double l_xi = tau.laplace(xi);
  const double l_u = tau.laplace(u);
  const double l_uxi = tau.laplace(u + xi);
  const double m1 = tau.mean();
  const double q_hat = (xi * m1 - 1.0 + l_xi) / (xi * xi * (1.0 - l_uxi));

  LaplaceReport rep;
  rep.xi = xi;
  auto add = [&](const char* name, const GridFn& f, double closed) {
    double num = f.laplace(xi);
    double r = std::abs(num - closed) / std::abs(closed);
    rep.rows.push_back({name, num, closed, r});
    rep.max_residual = std::max(rep.max_residual, r);
  };
  add("U", rf.U, 1.0 / (xi * (1.0 - l_xi)));
  add("W", rf.W, (l_u - l_uxi) / (xi * (1.0 - l_uxi)));
  add("M2", rf.M2,
      tau.moment(2) / (xi * (1.0 - l_xi)) + 2.0 * m1 * tau.tilted_mean(xi) / (xi * (1.0 - l_xi) * (1.0 - l_xi)));
  add("V", rf.V, 1.0 / (xi * (1.0 - l_uxi)));
  add("Q", rf.Q, q_hat);
  add("Z", rf.Z, tau.tilted_mean(xi) / (xi * (1.0 - l_xi) * (1.0 - l_xi)));
  add("Qplus", rf.Qplus, l_uxi * q_hat);
  return rep;
}

}  // namespace aoikit
