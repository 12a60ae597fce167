// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btspec/grid.hpp"

namespace btspec {

// Variational side of the interval problem: the weighted quotient
// rho0 = inf (||(xw)'||^2 + ||w'||^2) / ||(x^2+1)^{1/2} w||^2 over Dirichlet
// w, the nu(Lambda) curve whose zero crossing marks a real eigenvalue of
// the coupled interval system, and the eps^2 scaling law tying the two.

struct VariationalResult {
  double a = 0.0, b = 1.0;
  double rho0 = 0.0; // Richardson extrapolated over the n ladder
  std::vector<std::pair<int, double>> rho0_history; // (n, raw value)
  Grid1D grid;                   // finest grid used
  std::vector<double> minimizer; // positive, ||(x^2+1)^{1/2} w||_h = 1
  double el_residual = 0.0;      // relative discrete Euler-Lagrange residual

  std::string to_csv() const; // header n,rho0_n
  std::string to_json() const;
};

// Smallest generalized eigenvalue of the (stiffness, weight) pair on each
// grid in n_values, Richardson extrapolated at order 2. The minimizer and
// Euler-Lagrange residual come from the finest grid.
VariationalResult compute_rho0(double a, double b,
                               const std::vector<int>& n_values);

struct NuCurve {
  double eps = 0.0, a = 0.0, b = 1.0;
  std::vector<double> lambdas;
  std::vector<double> nus;
  std::optional<double> crossing; // Lambda with nu = 0, when bracketed

  std::string to_csv() const; // header lambda,nu
  std::string to_json() const;
};

// nu(Lambda): smallest eigenvalue of the symmetrized (P_Lambda - Lambda) on
// an n-point grid. Lambda must stay inside the resolvent-average existence
// window (0, eps^{2/3} threshold). The dense assembly parallelizes over
// columns; samples are evaluated in sequence.
double nu_of_lambda(double lambda, double eps, double a, double b, int n);

// Evaluates nu on the given samples and, when the sign changes, refines the
// crossing by bisection to 1e-12 absolute in Lambda. All-positive samples
// leave crossing empty.
NuCurve nu_curve(double eps, double a, double b,
                 const std::vector<double>& lambda_samples, int n = 311);

struct ScalingLawReport {
  double a = 0.0, b = 1.0;
  double rho0 = 0.0;
  std::vector<double> eps_values;
  std::vector<double> lambda1; // crossing per eps
  std::vector<double> ratios;  // lambda1 / eps^2
  double r_plus = 0.0;  // fitted at the largest eps from the +eps^{2/3} side
  double r_minus = 0.0; // fitted at the largest eps from the -eps^2 side
  bool within_bounds = false;    // later ratios inside the frozen corridor
  bool error_decreasing = false; // |ratio - rho0| strictly decreasing

  std::string to_csv() const; // header eps,lambda1,ratio
  std::string to_json() const;
};

// Locates the nu crossing for each eps (decreasing), forms lambda1/eps^2,
// freezes corridor constants r_+/r_- at the largest eps with a factor-2
// allowance, and checks the remaining ratios stay inside and converge.
ScalingLawReport verify_scaling_law(const std::vector<double>& eps_values,
                                    double a, double b, int n = 311);

struct AiryEstimateReport {
  double eps = 0.0, K = 0.0;
  double lambda = 0.0; // K eps^2
  double ratio_plus = 0.0;
  double ratio_minus = 0.0;

  std::string to_json() const;
};

// Auxiliary resolvent estimate: w_pm = (L_pm - Lambda)^{-1}(x w0) with
// Lambda = K eps^2 should differ from -+ i w0 by O(eps^{4/3}) in the scaled
// norm ||.|| + eps^{2/3} ||.'||, measured against the discrete H^2 norm of
// w0. Reports that ratio for both signs; zero w0 gives zero ratios.
AiryEstimateReport auxiliary_airy_estimate(double eps, double K,
                                           const Grid1D& grid,
                                           const std::vector<double>& w0);

} // namespace btspec
