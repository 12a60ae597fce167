// SPDX-License-Identifier: Apache-2.0
#include "btspec/rng.hpp"

#include <cmath>

namespace btspec {

double CounterRng::normal(std::uint64_t k) const {
  // Two sub-draws per normal; keep them disjoint from plain u01 streams by
  // offsetting into a high counter band.
  const std::uint64_t base = 0x8000000000000000ULL + 2 * k;
  double u1 = u01(base);
  double u2 = u01(base + 1);
  if (u1 <= 0.0)
    u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace btspec
