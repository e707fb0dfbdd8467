#pragma once

#include <cstdint>

namespace wgame {

/// SplitMix64 stream. Identical (seed, stream_index) pairs yield identical
/// draw sequences on every platform.
///
/// The starting state is mix(seed ^ mix(stream_index + kGamma)); each draw
/// advances the state by kGamma and returns mix(state), where mix is the
/// SplitMix64 finalizer (shifts 30/27/31, multipliers 0xBF58476D1CE4E5B9
/// and 0x94D049BB133111EB).
class RngStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() noexcept;
  /// 53-bit uniform double in [0, 1).
  double next_unit() noexcept;
  /// Uniform in [lo, hi].
  double uniform_real(double lo, double hi) noexcept;
  /// Uniform integer in [0, bound], rejection sampled (no modulo bias).
  std::uint64_t uniform_int(std::uint64_t bound) noexcept;

  static std::uint64_t mix(std::uint64_t z) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t state_;
};

}  // namespace wgame
