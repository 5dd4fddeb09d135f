#pragma once

#include <cstdint>
#include <random>

namespace omatch {

// Seedable generator whose output sequence is fixed across platforms: the
// engine is std::mt19937_64 (fully specified by the standard) and the
// distributions are implemented here rather than taken from <random>, whose
// distribution algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling on the largest multiple of bound.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via the Box-Muller transform (one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream index so that item i of a batch depends only
// on (seed, i), never on generation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace omatch
