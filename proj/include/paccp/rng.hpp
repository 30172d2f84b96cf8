#pragma once

#include <cstdint>

// Deterministic 64-bit RNG used for every randomized choice in the suite
// (heuristic starts, separation orders, test instance generation).  SplitMix64
// is tiny, seedable, and has no global state, which keeps runs reproducible
// across platforms and standard-library versions.

namespace paccp {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). n must be positive.
  int next_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Uniform real in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Derive an independent stream, e.g. one per heuristic run.
  std::uint64_t fork_seed() { return next_u64(); }

 private:
  std::uint64_t state_;
};

}  // namespace paccp
