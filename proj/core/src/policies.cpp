#include "aoikit/policies.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>

#include "aoikit/errors.hpp"

namespace aoikit {

namespace {

constexpr double kNever = -std::numeric_limits<double>::infinity();

OutcomeSeq sized(std::size_t n) {
  OutcomeSeq o;
  o.chi.assign(n, 1);
  o.psi.assign(n, 1);
  o.depart.assign(n, 0.0);
  return o;
}

OutcomeSeq run_pushout(const Workload& w) {
  const std::size_t n = w.size();
  OutcomeSeq o = sized(n);
  for (std::size_t i = 0; i < n; ++i) {
    double done = w.arrivals[i] + w.services[i];
    if (i + 1 < n && done > w.arrivals[i + 1]) {
      o.psi[i] = 0;
      o.depart[i] = w.arrivals[i + 1];
    } else {
      o.depart[i] = done;
    }
  }
  return o;
}

void reject(OutcomeSeq& o, std::size_t i, double t) {
  o.chi[i] = 0;
  o.psi[i] = 0;
  o.depart[i] = t;
}

// Bufferless server where the response to an arrival finding the server busy
// depends on how many such arrivals the current busy period has seen.
// `push(k)` says whether the k-th busy arrival (1-based) pushes out.
template <class PushRule>
OutcomeSeq run_bufferless(const Workload& w, PushRule push) {
  const std::size_t n = w.size();
  OutcomeSeq o = sized(n);
  double busy_until = kNever;
  std::size_t in_service = 0;
  long busy_arrivals = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = w.arrivals[i];
    if (t >= busy_until) {
      busy_arrivals = 0;
    } else {
      ++busy_arrivals;
      if (!push(busy_arrivals)) {
        reject(o, i, t);
        continue;
      }
      o.psi[in_service] = 0;
      o.depart[in_service] = t;
    }
    in_service = i;
    busy_until = t + w.services[i];
    o.depart[i] = busy_until;
  }
  return o;
}

OutcomeSeq run_pushout_two(const Workload& w) {
  const std::size_t n = w.size();
  OutcomeSeq o = sized(n);
  std::optional<std::size_t> serving;
  std::optional<std::size_t> waiting;
  double completes = kNever;

  auto finish_until = [&](double t) {
    while (serving && completes <= t) {
      o.depart[*serving] = completes;
      serving.reset();
      if (waiting) {
        serving = waiting;
        waiting.reset();
        completes = completes + w.services[*serving];
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double t = w.arrivals[i];
    finish_until(t);
    if (!serving) {
      serving = i;
      completes = t + w.services[i];
    } else {
      if (waiting) {
        o.psi[*waiting] = 0;
        o.depart[*waiting] = t;
      }
      waiting = i;
    }
  }
  finish_until(std::numeric_limits<double>::infinity());
  return o;
}

OutcomeSeq run_fifo(const Workload& w) {
  const std::size_t n = w.size();
  OutcomeSeq o = sized(n);
  double last = kNever;
  for (std::size_t i = 0; i < n; ++i) {
    last = std::max(w.arrivals[i], last) + w.services[i];
    o.depart[i] = last;
  }
  double mean_service = 0.0;
  double mean_interarrival = 0.0;
  if (w.tau && w.sigma) {
    mean_service = w.sigma->mean();
    mean_interarrival = w.tau->mean();
  } else if (n > 0) {
    for (double s : w.services) mean_service += s;
    mean_service /= static_cast<double>(n);
    mean_interarrival = w.arrivals.back() / static_cast<double>(n);
  }
  o.instability_warning = n > 0 && mean_service >= mean_interarrival;
  return o;
}

OutcomeSeq run_preemptive_lifo(const Workload& w) {
  const std::size_t n = w.size();
  OutcomeSeq o = sized(n);
  struct Job {
    std::size_t index;
    double remaining;
  };
  std::vector<Job> stack;
  double now = 0.0;

  auto work_until = [&](double t) {
    while (!stack.empty()) {
      Job& top = stack.back();
      double done = now + top.remaining;
      if (done > t) {
        top.remaining -= t - now;
        now = t;
        return;
      }
      o.depart[top.index] = done;
      now = done;
      stack.pop_back();
    }
    now = t;
  };

  for (std::size_t i = 0; i < n; ++i) {
    work_until(w.arrivals[i]);
    stack.push_back({i, w.services[i]});
  }
  work_until(std::numeric_limits<double>::infinity());
  return o;
}

}  // namespace

PolicyKind PolicyKind::block_then_push(int ell) {
  if (ell < 0) throw InvalidSpec("ell must be nonnegative");
  return {PolicyTag::BlockThenPush, ell};
}

PolicyKind PolicyKind::push_then_block(int ell) {
  if (ell < 0) throw InvalidSpec("ell must be nonnegative");
  return {PolicyTag::PushThenBlock, ell};
}

std::string PolicyKind::name() const {
  switch (tag) {
    case PolicyTag::Pushout: return "pushout";
    case PolicyTag::Blocking: return "blocking";
    case PolicyTag::BlockThenPush: return "bp:" + std::to_string(ell);
    case PolicyTag::PushThenBlock: return "pb:" + std::to_string(ell);
    case PolicyTag::PushoutTwo: return "p2";
    case PolicyTag::Fifo: return "fifo";
    case PolicyTag::PreemptiveLifo: return "plifo";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view text) {
  if (text == "pushout") return PolicyKind::pushout();
  if (text == "blocking") return PolicyKind::blocking();
  if (text == "p2") return PolicyKind::pushout_two();
  if (text == "fifo") return PolicyKind::fifo();
  if (text == "plifo") return PolicyKind::preemptive_lifo();
  if (text.size() > 3 && (text.starts_with("bp:") || text.starts_with("pb:"))) {
    auto digits = text.substr(3);
    int ell = -1;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), ell);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || ell < 0)
      throw InvalidSpec("bad ell in policy '" + std::string(text) + "'");
    return text[0] == 'b' ? PolicyKind::block_then_push(ell) : PolicyKind::push_then_block(ell);
  }
  throw InvalidSpec("unknown policy '" + std::string(text) + "'");
}

OutcomeSeq simulate(const PolicyKind& policy, const Workload& w) {
  switch (policy.tag) {
    case PolicyTag::Pushout: return run_pushout(w);
    case PolicyTag::Blocking: return run_bufferless(w, [](long) { return false; });
    case PolicyTag::BlockThenPush: return run_bufferless(w, [ell = policy.ell](long k) { return k > ell; });
    case PolicyTag::PushThenBlock: return run_bufferless(w, [ell = policy.ell](long k) { return k <= ell; });
    case PolicyTag::PushoutTwo: return run_pushout_two(w);
    case PolicyTag::Fifo: return run_fifo(w);
    case PolicyTag::PreemptiveLifo: return run_preemptive_lifo(w);
  }
  throw InvalidSpec("unhandled policy");
}

}  // namespace aoikit
