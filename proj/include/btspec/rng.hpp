// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace btspec {

// Counter-based generator: draw k is a pure function of (seed, k), so
// sample sweeps stay reproducible regardless of evaluation order.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  // 64 random bits for counter value k.
  std::uint64_t bits(std::uint64_t k) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double u01(std::uint64_t k) const {
    return static_cast<double>(bits(k) >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo,hi).
  double uniform(std::uint64_t k, double lo, double hi) const {
    return lo + (hi - lo) * u01(k);
  }

  // Standard normal via Box-Muller on two derived counters.
  double normal(std::uint64_t k) const;

  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
};

} // namespace btspec
