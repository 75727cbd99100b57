#pragma once

#include <cstdint>

namespace qharmony {

/// Counter-based splittable generator (splitmix64 core).  Streams derived
/// from (seed, stream) are statistically independent, and every sequence is
/// identical across platforms: the generator uses only 64-bit integer ops.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0)
      : state_(mix(seed ^ 0x8BADF00D5EEDull) ^ mix(stream * 0x9E3779B97F4A7C15ull + 1)) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  uint64_t next_below(uint64_t bound) {
    const uint64_t threshold = -bound % bound;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static uint64_t mix(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  uint64_t state_;
};

}  // namespace qharmony
