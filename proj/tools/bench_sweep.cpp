// SPDX-License-Identifier: Apache-2.0
// Times the resolvent norm sweep with the serial and the OpenMP kernel on
// the same grid and reports the speedup. The two sweeps must agree exactly
// since every grid point is an independent solve.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "btspec/operators.hpp"
#include "btspec/spectra.hpp"

using namespace btspec;

namespace {

std::vector<double> axis(double a, double b, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

double timed(const OperatorSpec& spec, const std::vector<double>& re,
             const std::vector<double>& im, SweepPolicy policy,
             ResolventGrid& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = pseudospectrum_grid(spec, re, im, 1e-6, policy);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

} // namespace

int main(int argc, char** argv) {
  int cells = argc > 1 ? std::atoi(argv[1]) : 21;
  OperatorSpec spec;
  spec.kind = OperatorKind::ComplexHarmonic;
  spec.grid = Grid1D::make(-10.0, 10.0, 801);
  spec.order = 4;

  const auto re = axis(0.0, 4.0, cells);
  const auto im = axis(-3.0, 0.0, cells);

  ResolventGrid serial, parallel;
  const double ts = timed(spec, re, im, SweepPolicy::Serial, serial);
  const double tp = timed(spec, re, im, SweepPolicy::Parallel, parallel);

  double max_diff = 0.0;
  for (size_t i = 0; i < serial.norms.size(); ++i)
    max_diff = std::max(max_diff,
                        std::abs(serial.norms[i] - parallel.norms[i]));

  std::printf("grid %dx%d, matrix n = %d\n", cells, cells, spec.grid.n);
  std::printf("serial   %.3f s\n", ts);
  std::printf("parallel %.3f s\n", tp);
  std::printf("speedup  %.2fx, max |difference| %.3e\n", ts / tp, max_diff);
  return max_diff == 0.0 ? 0 : 1;
}
