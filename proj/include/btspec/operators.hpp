// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btspec/banded.hpp"
#include "btspec/dense.hpp"
#include "btspec/grid.hpp"

namespace btspec {

enum class OperatorKind {
  BlochTorreyLine,     // 3x3 system -eps^2 u'' - b x u, b = (b0, 0, x), truncated line
  BlochTorreyInterval, // same on a bounded interval
  RotatedBlochTorrey,  // diagonalized transverse block: diag(+ix,-ix,0), 1/sqrt(2) coupling
  GeneralField,        // 3x3 system with sampled b(x) and transverse frequencies xi2, xi3
  ComplexAiryPlus,     // -eps^2 d^2 + ix
  ComplexAiryMinus,    // -eps^2 d^2 - ix
  ComplexHarmonic,     // -d^2 - 2ix^2
  QuarticM0,           // -d^2 + (w^2-lambda)^2 + 1/eps
  QuarticM,            // QuarticM0 + (2w^2+lambda)/(w^2-lambda)^2
  DilatedM,            // QuarticM after complex dilation by theta
  HatL,                // harmonic oscillator with the full perturbation series potential
  IntervalPLambda,     // dense P_Lambda = -eps^2 d^2 + (resolvent average)
  LimitAtilde,         // generalized pair for the variational quotient
};

std::string kind_name(OperatorKind k);
OperatorKind kind_from_name(const std::string& name);

struct OperatorSpec {
  OperatorKind kind = OperatorKind::ComplexHarmonic;
  Grid1D grid;
  int order = 2;

  std::optional<double> eps;
  std::optional<double> b0;
  std::optional<std::vector<std::array<double, 3>>> bfield; // per grid node
  std::optional<double> xi2, xi3;
  std::optional<cdouble> lambda;
  std::optional<cdouble> mu;
  std::optional<cdouble> theta;

  // Throws std::invalid_argument unless exactly the parameters relevant to
  // kind are present and in range.
  void validate() const;

  std::string to_json() const;
  static OperatorSpec from_json(const std::string& text);
};

// 3n x 3n system matrices, interleaved node-major component ordering.
ComplexBandedMatrix build_bloch_torrey(const OperatorSpec& spec);
ComplexBandedMatrix build_rotated(const OperatorSpec& spec);

// The rotated system in rescaled variables: kinetic coefficient 1,
// diagonal +-ix, coupling strength eps_check^{-1/2}/sqrt(2).
ComplexBandedMatrix build_scaled_rotated(double eps_check, const Grid1D& grid,
                                         int order);

// Scalar model operators (ComplexAiry*, ComplexHarmonic, Quartic*, DilatedM, HatL).
ComplexBandedMatrix build_scalar(const OperatorSpec& spec);

// Dense P_Lambda, symmetrized by averaging with its transpose when
// symmetrize is true. Lambda must be real and below the Airy threshold.
DenseComplexMatrix build_interval_plambda(const OperatorSpec& spec,
                                          bool symmetrize = true);

// Generalized pair (A, Bw) whose smallest generalized eigenvalue
// discretizes the variational quotient; A = H^T H + G^T G with H: w -> w'
// and G: w -> (xw)', Bw = h * diag(1 + x_i^2).
std::pair<ComplexBandedMatrix, ComplexBandedMatrix>
build_limit_atilde(const OperatorSpec& spec);

// Dispatcher for every kind that yields a square banded matrix.
ComplexBandedMatrix build_matrix(const OperatorSpec& spec);

// Re Lambda must stay below eps^{2/3} * airy_threshold() for the scalar
// Airy resolvents entering P_Lambda to exist.
double airy_threshold(); // |nu1| / 2

} // namespace btspec
