// SPDX-License-Identifier: Apache-2.0
#include "btspec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "btspec/banded.hpp"

namespace btspec {

Grid1D Grid1D::make(double a, double b, int n) {
  if (!(a < b)) throw std::invalid_argument("grid: require a < b");
  if (n < 3) throw std::invalid_argument("grid: require n >= 3");
  Grid1D g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.h = (b - a) / (n + 1);
  return g;
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<size_t>(i)] = node(i);
  return xs;
}

namespace {

// Coefficients c_j such that sum_j c_j u(x + o_j h) = h^2 u''(x) + O(h^{p}).
// Solved from the moment conditions sum_j c_j o_j^k = k! * delta_{k,2},
// k = 0..m-1, via dense Gaussian elimination on the small Vandermonde system.
std::vector<double> stencil_for_offsets(const std::vector<int>& offsets) {
  const int m = static_cast<int>(offsets.size());
  std::vector<double> A(static_cast<size_t>(m * m));
  std::vector<double> rhs(static_cast<size_t>(m), 0.0);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j)
      A[static_cast<size_t>(k * m + j)] = std::pow(double(offsets[static_cast<size_t>(j)]), k);
    if (k == 2) rhs[static_cast<size_t>(k)] = 2.0;
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(A[static_cast<size_t>(r * m + col)]) >
          std::abs(A[static_cast<size_t>(piv * m + col)]))
        piv = r;
    if (piv != col) {
      for (int c = 0; c < m; ++c)
        std::swap(A[static_cast<size_t>(col * m + c)], A[static_cast<size_t>(piv * m + c)]);
      std::swap(rhs[static_cast<size_t>(col)], rhs[static_cast<size_t>(piv)]);
    }
    const double d = A[static_cast<size_t>(col * m + col)];
    for (int r = col + 1; r < m; ++r) {
      const double f = A[static_cast<size_t>(r * m + col)] / d;
      for (int c = col; c < m; ++c)
        A[static_cast<size_t>(r * m + c)] -= f * A[static_cast<size_t>(col * m + c)];
      rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(col)];
    }
  }
  std::vector<double> c(static_cast<size_t>(m));
  for (int r = m - 1; r >= 0; --r) {
    double s = rhs[static_cast<size_t>(r)];
    for (int col = r + 1; col < m; ++col)
      s -= A[static_cast<size_t>(r * m + col)] * c[static_cast<size_t>(col)];
    c[static_cast<size_t>(r)] = s / A[static_cast<size_t>(r * m + r)];
  }
  return c;
}

} // namespace

ComplexBandedMatrix second_derivative_matrix(const Grid1D& grid, int order) {
  const int n = grid.n;
  const double h2 = grid.h * grid.h;
  if (order == 2) {
    ComplexBandedMatrix m(n, 1, 1);
    for (int i = 0; i < n; ++i) {
      m.set(i, i, 2.0 / h2);
      if (i > 0) m.set(i, i - 1, -1.0 / h2);
      if (i + 1 < n) m.set(i, i + 1, -1.0 / h2);
    }
    return m;
  }
  if (order != 4) throw std::invalid_argument("second_derivative_matrix: order must be 2 or 4");
  if (n < 5)
    throw std::invalid_argument("second_derivative_matrix: order 4 needs n >= 5");

  ComplexBandedMatrix m(n, 4, 4);
  // Interior rows: standard 5-point fourth order stencil for -u''. At
  // i = 1 and i = n-2 the outermost point is the boundary node, whose
  // Dirichlet value is zero, so the column is simply dropped.
  static const double w5[5] = {1.0, -16.0, 30.0, -16.0, 1.0};
  for (int i = 1; i < n - 1; ++i)
    for (int d = -2; d <= 2; ++d)
      if (i + d >= 0 && i + d < n) m.set(i, i + d, w5[d + 2] / (12.0 * h2));
  // Rows next to the boundary use a one-sided stencil touching the boundary
  // node, whose Dirichlet value is zero, plus five interior neighbours.
  // Offsets are relative to the row's node; the boundary term is dropped.
  const std::vector<int> offs = {-1, 0, 1, 2, 3, 4};
  const std::vector<double> c = stencil_for_offsets(offs);
  for (size_t j = 1; j < offs.size(); ++j) { // skip offset -1 (boundary node)
    m.set(0, offs[j], -c[j] / h2);
    m.set(n - 1, n - 1 - offs[j], -c[j] / h2);
  }
  return m;
}

std::complex<double> richardson_extrapolate(
    std::vector<std::pair<double, std::complex<double>>> samples, int order) {
  if (samples.size() < 2)
    throw std::invalid_argument("richardson_extrapolate: need at least two samples");
  if (order < 1) throw std::invalid_argument("richardson_extrapolate: order must be positive");
  std::sort(samples.begin(), samples.end(),
            [](const auto& p, const auto& q) { return p.first > q.first; });
  for (size_t i = 1; i < samples.size(); ++i)
    if (samples[i].first == samples[i - 1].first)
      throw std::invalid_argument("richardson_extrapolate: duplicate step sizes");

  // Neville-style elimination of error terms h^order, h^{order+2}, ...
  const size_t m = samples.size();
  std::vector<std::complex<double>> v(m);
  std::vector<double> hs(m);
  for (size_t i = 0; i < m; ++i) {
    hs[i] = samples[i].first;
    v[i] = samples[i].second;
  }
  for (size_t level = 1; level < m; ++level) {
    const double p = order + 2.0 * (level - 1);
    for (size_t i = 0; i + level < m; ++i) {
      const double r = hs[i] / hs[i + level];
      const double rp = std::pow(r, p);
      v[i] = (rp * v[i + 1] - v[i]) / (rp - 1.0);
    }
  }
  return v[0];
}

double l2_norm(const Grid1D& grid, const std::vector<std::complex<double>>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(grid.h * s);
}

} // namespace btspec
