#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aoikit/workload.hpp"

namespace aoikit {

enum class PolicyTag { Pushout, Blocking, BlockThenPush, PushThenBlock, PushoutTwo, Fifo, PreemptiveLifo };

struct PolicyKind {
  PolicyTag tag = PolicyTag::Pushout;
  int ell = 0;  // only meaningful for BlockThenPush / PushThenBlock

  static PolicyKind pushout() { return {PolicyTag::Pushout, 0}; }
  static PolicyKind blocking() { return {PolicyTag::Blocking, 0}; }
  static PolicyKind block_then_push(int ell);
  static PolicyKind push_then_block(int ell);
  static PolicyKind pushout_two() { return {PolicyTag::PushoutTwo, 0}; }
  static PolicyKind fifo() { return {PolicyTag::Fifo, 0}; }
  static PolicyKind preemptive_lifo() { return {PolicyTag::PreemptiveLifo, 0}; }

  /// CLI spelling: pushout, blocking, bp:L, pb:L, p2, fifo, plifo.
  std::string name() const;
  bool operator==(const PolicyKind&) const = default;
};

/// Inverse of PolicyKind::name(). Throws InvalidSpec on unknown names or ell < 0.
PolicyKind parse_policy(std::string_view text);

/// Per-message outcome: accepted (chi), successfully served (psi), and the
/// departure epoch T'_n (completion, push-out or rejection instant).
struct OutcomeSeq {
  std::vector<std::uint8_t> chi;
  std::vector<std::uint8_t> psi;
  std::vector<double> depart;
  // Set for Fifo when E sigma >= E tau (spec means, or sample means when the
  // workload carries no specs). The run itself still completes.
  bool instability_warning = false;

  bool operator==(const OutcomeSeq&) const = default;
};

/// Runs the admission/service discipline on the workload. A departure at
/// exactly T_n is processed before the arrival at T_n. Messages still in the
/// system after the last arrival complete as if nothing else arrived.
OutcomeSeq simulate(const PolicyKind& policy, const Workload& w);

}  // namespace aoikit
