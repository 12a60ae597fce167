// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace btspec {

class ComplexBandedMatrix;

// Uniform grid on (a,b) with n interior nodes and implicit Dirichlet
// endpoints: x_i = a + i*h, i = 1..n, h = (b-a)/(n+1).
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  double h = 0.0;

  static Grid1D make(double a, double b, int n);

  // i in [0, n): the (i+1)-th interior node.
  double node(int i) const { return a + (i + 1) * h; }
  std::vector<double> nodes() const;

  // Same spacing, interior count 2n+1 (halves h exactly).
  Grid1D refined() const { return make(a, b, 2 * n + 1); }
};

// Matrix of -d^2/dx^2 on the interior nodes (Dirichlet endpoints
// eliminated). order 2: classic tridiagonal stencil, exactly symmetric.
// order 4: 5-point interior stencil with a one-sided closure of order 4 at
// the two nodes next to the boundary; requires n >= 5.
ComplexBandedMatrix second_derivative_matrix(const Grid1D& grid, int order);

// Richardson extrapolation of (h, v) samples assuming an error expansion
// v(h) = v + c1 h^order + c2 h^{order+2} + ... Returns the last extrapolant.
std::complex<double>
richardson_extrapolate(std::vector<std::pair<double, std::complex<double>>> values,
                       int order);

// Discrete L2 norm sqrt(h) * ||v||_2 (approximates the L2 norm of the
// function sampled at interior nodes).
double l2_norm(const Grid1D& grid, const std::vector<std::complex<double>>& v);

} // namespace btspec
