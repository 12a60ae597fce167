// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "btspec/grid.hpp"
#include "btspec/operators.hpp"

namespace btspec {

// Fourier-side oracle for the coupled line system. Eigenvalues of the
// scaled system reappear as parameters lambda where the quartic pencil
// M_lambda = -d^2 + (w^2 - lambda)^2 + 1/eps_check + (2w^2 + lambda)/(w^2 - lambda)^2
// has a nontrivial kernel, which gives a pipeline completely independent
// of the 3x3 discretization.

struct ReductionProbe {
  cdouble lambda{};
  double eps_check = 0.0;
  Grid1D grid;
  cdouble smallest_eig{};           // eigenvalue of M_lambda nearest 0
  double residual = 0.0;            // backward error of that eigenpair
  std::vector<cdouble> eigenvector; // kernel candidate v, unit 2-norm
};

struct ReconstructedComponents {
  std::vector<cdouble> u_s; // (w^2 - lambda)^{1/2} v, principal branch
  std::vector<cdouble> u_d; // u_s' / (w^2 - lambda)
  std::vector<cdouble> u_3; // eps_check^{-1/2} u_s / (sqrt(2) (w^2 - lambda))
};

// Assembles M_lambda on the grid and reports its eigenvalue nearest 0.
// lambda must stay off the nonnegative real axis.
ReductionProbe probe_mlambda(cdouble lambda, double eps_check,
                             const Grid1D& grid, int order = 4);

// Complex secant iteration on lambda -> smallest_eig(M_lambda), stopping
// when |smallest_eig| < tol. A start already below tol returns at once.
// Throws ConvergenceError after 50 iterations.
cdouble find_lambda_root(cdouble start, double eps_check, const Grid1D& grid,
                         double tol, int order = 4);

// Rebuilds the three Fourier-side components from a kernel candidate v of
// M_lambda. The square root uses the principal branch with the cut on the
// negative real axis, which keeps conjugated inputs mapping to conjugated
// outputs.
ReconstructedComponents reconstruct_components(cdouble lambda,
                                               double eps_check,
                                               const Grid1D& grid,
                                               const std::vector<cdouble>& v);

// Largest of the discrete L2 residuals of the three first-order coupling
// equations for the reconstructed components with zero right-hand side,
// relative to ||u_s||. Uses centered differences for the w-derivatives.
double system_residual(cdouble lambda, double eps_check, const Grid1D& grid,
                       const ReconstructedComponents& c);

// Both sides of the energy identity
// ||u_s'/(w^2-lambda)||^2 + (1/eps_check) ||u_s/(w^2-lambda)||^2 = ||u_s||^2,
// returned as (lhs, rhs) for a kernel solution.
std::pair<double, double> energy_identity(cdouble lambda, double eps_check,
                                          const Grid1D& grid,
                                          const ReconstructedComponents& c);

} // namespace btspec
