#include "aoikit/rng.hpp"

namespace aoikit {

std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(seed) ^ (0xd1b54a32d192ed03ULL * (stream + 1)))) {}

std::uint64_t CounterRng::next_u64() noexcept {
  const std::uint64_t c = counter_++;
  // Two rounds so that adjacent counters decorrelate fully.
  return mix64(mix64(key_ ^ c) + key_);
}

double CounterRng::next_open01() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base ^ mix64(index + 0x5851f42d4c957f2dULL));
}

}  // namespace aoikit
