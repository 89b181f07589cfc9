#pragma once

#include <cstdint>

namespace aoikit {

/// Counter-based random stream. The n-th draw of stream `s` under seed `k` is
/// a pure function of (k, s, n), so independent sub-streams never overlap and
/// extending a run never reshuffles earlier draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double next_open01() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic per-replication seed derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace aoikit
