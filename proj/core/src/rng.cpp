#include "wgame/rng.hpp"

#include <limits>

namespace wgame {

std::uint64_t RngStream::mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), state_(mix(seed ^ mix(stream_index + kGamma))) {}

std::uint64_t RngStream::next_u64() noexcept {
  state_ += kGamma;
  return mix(state_);
}

double RngStream::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_real(double lo, double hi) noexcept {
  // Always consumes one draw so the sequence layout never depends on the bounds.
  const double u = next_unit();
  return lo == hi ? lo : lo + u * (hi - lo);
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) noexcept {
  if (bound == std::numeric_limits<std::uint64_t>::max()) return next_u64();
  const std::uint64_t range = bound + 1;
  // Values below `threshold` would over-represent the low residues.
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % range;
  }
}

}  // namespace wgame
