// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "btspec/banded.hpp"
#include "btspec/dense.hpp"

namespace btspec {

struct ShiftInvertResult {
  cdouble eigenvalue{};
  double residual = 0.0;
  std::vector<cdouble> eigenvector; // unit 2-norm
  bool shift_is_eigenvalue = false; // LU at the shift was singular
};

// Eigenvalue of m nearest to shift, by inverse iteration on (m - shift)^{-1}
// with Rayleigh-quotient refinement. residual is the backward error
// ||A v - lambda v||_2 / max(1, ||A||_inf) for the unit iterate, so a fixed
// tol is meaningful across matrix scales. Throws ConvergenceError (carrying
// the best iterate) when max_iter is exhausted above tol.
ShiftInvertResult shift_invert_eigenvalue(const ComplexBandedMatrix& m,
                                          cdouble shift, double tol,
                                          int max_iter = 200);

// Smallest singular value of m via inverse power iteration on the normal
// equations, applied through paired LU solves. Returns 0 when the LU is
// numerically singular.
double smallest_singular_value(const ComplexBandedMatrix& m, double tol);

// Greedy nearest-distance matching of computed eigenvalues to targets. Each
// target and each value is consumed at most once; among equidistant values
// the one with smaller |Im| wins. Returns, per target, the index into
// `values` or nullopt when values run out.
std::vector<std::optional<size_t>>
match_to_targets(const std::vector<cdouble>& values,
                 const std::vector<cdouble>& targets);

} // namespace btspec
