// rng.hpp — seeded deterministic random stream.
//
// Everything stochastic in the project draws from this one generator type so
// runs are replayable bit for bit. The training loop consumes draws in a
// fixed, documented order per episode:
//   1. start node        — uniform_below(#non-sink nodes)
//   2. per step: explore coin            — uniform_double() < epsilon
//   3. per step, explore: neighbor pick  — uniform_below(#neighbors)
//      per step, exploit: tie-break pick — uniform_below(#maximizers),
//                                          drawn only when maximizers >= 2
// The distributed runtime replays the identical sequence, which is what makes
// its Q-table comparable entry for entry with the centralized one.

#pragma once

#include <cstdint>

namespace qspt {

// splitmix64: tiny state, solid statistical quality for simulation use, and
// trivially portable — the sequence depends on nothing but the seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n). n must be positive.
  uint64_t uniform_below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform_double() { return (next_u64() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

// Derives an independent stream for item `index` of a corpus, so graphs can
// be generated in parallel yet reproducibly.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  uint64_t z = base ^ (0x9e3779b97f4a7c15ull * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace qspt
