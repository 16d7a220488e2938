#pragma once

#include <cstdint>
#include <random>

namespace cubicsum {

// Seeded RNG with portable derived draws.  std::mt19937_64 itself is fully
// specified by the standard; the derived draws below avoid std::*_distribution,
// whose algorithms are implementation-defined, so identical seeds give identical
// streams on every platform/compiler.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform integer in [lo, hi] via rejection sampling (unbiased).
  int64_t uniform(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<int64_t>(next_u64());  // full 2^64 range
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<int64_t>(x % span);
  }

  // Uniform real in [0, 1) with 53 random bits.
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cubicsum
