#include <algorithm>

#include "aoikit/paths.hpp"

namespace aoikit {

namespace {

template <class Piece>
std::optional<double> first_difference(const std::vector<Piece>& a, const std::vector<Piece>& b) {
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  if (ia == a.end() && ib == b.end()) return std::nullopt;
  if (ia == a.end()) return ib->t0;
  if (ib == b.end()) return ia->t0;
  return std::min(ia->t0, ib->t0);
}

}  // namespace

Observation1Report check_observation1(const Workload& w) {
  OutcomeSeq push = simulate(PolicyKind::pushout(), w);
  OutcomeSeq lifo = simulate(PolicyKind::preemptive_lifo(), w);
  Observation1Report rep;
  FreshnessIndex fi = build_freshness(w, push);
  double last = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (push.psi[i]) last = std::max(last, push.depart[i]);
  Window win{fi.times.front(), last};
  if (!(win.w1 > win.w0)) return rep;

  DriftPath ap = extract_alpha(w, push, win);
  DriftPath al = extract_alpha(w, lifo, win);
  StepPath bp = extract_beta(w, push, win);
  StepPath bl = extract_beta(w, lifo, win);
  rep.alpha_pieces = ap.pieces.size();
  rep.beta_pieces = bp.pieces.size();
  auto da = first_difference(ap.pieces, al.pieces);
  auto db = first_difference(bp.pieces, bl.pieces);
  if (da || db) {
    rep.equal = false;
    rep.first_mismatch = std::min(da.value_or(win.w1), db.value_or(win.w1));
  }
  return rep;
}

Observation2Report check_observation2(const Workload& w, const PolicyKind& buffered) {
  OutcomeSeq fifo = simulate(PolicyKind::fifo(), w);
  OutcomeSeq other = simulate(buffered, w);
  FreshnessIndex ff = build_freshness(w, fifo);
  FreshnessIndex fo = build_freshness(w, other);
  Observation2Report rep;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!other.psi[i]) continue;
    const double t = other.depart[i];
    ++rep.epochs;
    const double last_arrival = *(std::upper_bound(w.arrivals.begin(), w.arrivals.end(), t) - 1);
    const double fresh_o = *fo.at(t);
    auto fresh_f = ff.at(t);
    if (!fresh_f) {
      rep.all_equal = false;
      continue;
    }
    const double alpha_o = t - fresh_o;
    const double alpha_f = t - *fresh_f;
    const double beta_o = last_arrival - fresh_o;
    const double beta_f = last_arrival - *fresh_f;
    if (alpha_f != alpha_o || beta_f != beta_o) rep.all_equal = false;
    if (alpha_f < alpha_o || beta_f < beta_o) {
      ++rep.violations;
      rep.first_violation = std::min(rep.first_violation.value_or(t), t);
    }
  }
  return rep;
}

}  // namespace aoikit
