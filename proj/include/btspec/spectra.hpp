// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "btspec/linalg.hpp"
#include "btspec/operators.hpp"

namespace btspec {

struct Window {
  double re_min, re_max, im_min, im_max;
  bool contains(cdouble z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
           z.imag() <= im_max;
  }
};

struct ResolventGrid {
  std::vector<double> re_axis;
  std::vector<double> im_axis;
  // norms[j * re_axis.size() + i] is the value at re_axis[i] + i*im_axis[j]
  std::vector<double> norms;
  OperatorSpec spec;

  double at(size_t i, size_t j) const { return norms[j * re_axis.size() + i]; }
  std::string to_csv() const;  // header re,im,norm; 17 significant digits
  std::string to_json() const; // embeds the operator spec
};

enum class SweepPolicy { Serial, Parallel };

// All eigenvalues of the discretized operator inside the window (dense QR),
// each with a residual from one inverse-iteration step. Eigenvalues with
// residual above 1e-6 are kept, not dropped.
EigenResult survey_spectrum(const OperatorSpec& spec, const Window& window,
                            double tol = 1e-10);

// Nearest eigenvalue to target via shift-invert.
ShiftInvertResult locate_eigenvalue(const OperatorSpec& spec, cdouble target,
                                    double tol, int max_iter = 200);

struct TwoGridResult {
  cdouble coarse{}, fine{}, extrapolated{};
  double difference = 0.0; // |fine - coarse|, the discretization-gate value
};

// locate_eigenvalue at spec.grid and its refinement, Richardson-combined.
TwoGridResult locate_eigenvalue_two_grid(const OperatorSpec& spec, cdouble target,
                                         double tol);

// ||(A - Lambda)^{-1}|| = 1 / sigma_min, infinity when Lambda is numerically
// in the spectrum.
double resolvent_norm(const OperatorSpec& spec, cdouble lambda, double tol = 1e-6);
double resolvent_norm(const ComplexBandedMatrix& m, cdouble lambda, double tol = 1e-6);

ResolventGrid pseudospectrum_grid(const OperatorSpec& spec,
                                  const std::vector<double>& re_axis,
                                  const std::vector<double>& im_axis,
                                  double tol = 1e-6,
                                  SweepPolicy policy = SweepPolicy::Parallel);

struct TruncationReport {
  std::vector<double> l_values;
  std::vector<cdouble> eigenvalues;
  std::vector<double> diffs; // successive |difference|
  cdouble converged{};
  double smallest_adequate_l = 0.0;
  bool pass = false;
};

// Re-locates the target eigenvalue across truncation radii [-L, L] at fixed
// grid spacing; passes when successive values differ by less than tol.
TruncationReport validate_truncation(const OperatorSpec& spec, cdouble target,
                                     const std::vector<double>& l_values,
                                     double tol);

// Default truncation radius for problems posed on the whole line.
double default_truncation(double eps, cdouble lambda_target);

} // namespace btspec
