#pragma once

#include <cstdint>

namespace fourhammer {

/// SplitMix64 stream. The step is fixed bit-for-bit so that a seed and an
/// action list replay identically in any language.
struct RngStream {
  std::uint64_t state = 0;
  std::uint64_t draws = 0;

  RngStream() = default;
  explicit RngStream(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    ++draws;
    return z ^ (z >> 31);
  }

  /// Uniform face 1..6 (modulo bias below 2^-62 is accepted).
  int d6() { return static_cast<int>(next_u64() % 6) + 1; }

  bool operator==(const RngStream&) const = default;
};

}  // namespace fourhammer
