// SPDX-License-Identifier: Apache-2.0
#include "btspec/reduction.hpp"

#include <cmath>
#include <stdexcept>

#include "btspec/linalg.hpp"

namespace btspec {

namespace {

double l2_norm(const std::vector<cdouble>& v, double h) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(h * s);
}

// Fourth-order centered first derivative, falling back to lower order near
// the ends. The functions this is applied to decay rapidly toward the box
// boundary, so the endpoint stencils do not pollute the interior residual.
std::vector<cdouble> derivative(const std::vector<cdouble>& v, double h) {
  const size_t n = v.size();
  std::vector<cdouble> d(n);
  if (n < 2) return d;
  d[0] = (v[1] - v[0]) / h;
  d[n - 1] = (v[n - 1] - v[n - 2]) / h;
  if (n >= 3) {
    d[1] = (v[2] - v[0]) / (2.0 * h);
    d[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * h);
  }
  for (size_t i = 2; i + 2 < n; ++i)
    d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
  return d;
}

void check_lambda(cdouble lambda) {
  if (lambda.imag() == 0.0 && lambda.real() >= 0.0)
    throw std::invalid_argument(
        "reduction: lambda on the nonnegative real axis is not allowed");
}

} // namespace

ReductionProbe probe_mlambda(cdouble lambda, double eps_check,
                             const Grid1D& grid, int order) {
  check_lambda(lambda);
  OperatorSpec spec;
  spec.kind = OperatorKind::QuarticM;
  spec.grid = grid;
  spec.order = order;
  spec.eps = eps_check;
  spec.lambda = lambda;
  spec.validate();
  const auto m = build_scalar(spec);
  const auto r = shift_invert_eigenvalue(m, cdouble(0.0, 0.0), 1e-11);
  ReductionProbe probe;
  probe.lambda = lambda;
  probe.eps_check = eps_check;
  probe.grid = grid;
  probe.smallest_eig = r.eigenvalue;
  probe.residual = r.residual;
  probe.eigenvector = r.eigenvector;
  return probe;
}

cdouble find_lambda_root(cdouble start, double eps_check, const Grid1D& grid,
                         double tol, int order) {
  if (tol <= 0.0) throw std::invalid_argument("find_lambda_root: tol <= 0");
  cdouble l0 = start;
  cdouble f0 = probe_mlambda(l0, eps_check, grid, order).smallest_eig;
  if (std::abs(f0) < tol) return l0;
  // Second secant node, displaced on the scale of the expected correction.
  cdouble l1 = l0 + 1e-3 * (std::abs(l0) + 1.0);
  cdouble f1 = probe_mlambda(l1, eps_check, grid, order).smallest_eig;
  cdouble best = std::abs(f1) < std::abs(f0) ? l1 : l0;
  double best_abs = std::min(std::abs(f0), std::abs(f1));
  for (int it = 0; it < 50; ++it) {
    if (std::abs(f1) < tol) return l1;
    const cdouble denom = f1 - f0;
    if (denom == cdouble(0.0, 0.0)) break;
    const cdouble l2 = l1 - f1 * (l1 - l0) / denom;
    if (l2.imag() == 0.0 && l2.real() >= 0.0)
      throw ConvergenceError(
          "find_lambda_root: iterate reached the nonnegative real axis", best,
          best_abs);
    l0 = l1;
    f0 = f1;
    l1 = l2;
    f1 = probe_mlambda(l1, eps_check, grid, order).smallest_eig;
    if (std::abs(f1) < best_abs) {
      best_abs = std::abs(f1);
      best = l1;
    }
  }
  if (std::abs(f1) < tol) return l1;
  throw ConvergenceError("find_lambda_root: secant iteration diverged", best,
                         best_abs);
}

ReconstructedComponents reconstruct_components(cdouble lambda,
                                               double eps_check,
                                               const Grid1D& grid,
                                               const std::vector<cdouble>& v) {
  check_lambda(lambda);
  if (v.size() != static_cast<size_t>(grid.n))
    throw std::invalid_argument("reconstruct_components: size mismatch");
  const size_t n = v.size();
  ReconstructedComponents c;
  c.u_s.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double w = grid.node(static_cast<int>(i));
    c.u_s[i] = std::sqrt(cdouble(w * w, 0.0) - lambda) * v[i];
  }
  const auto ds = derivative(c.u_s, grid.h);
  c.u_d.resize(n);
  c.u_3.resize(n);
  const double s = 1.0 / std::sqrt(2.0 * eps_check);
  for (size_t i = 0; i < n; ++i) {
    const double w = grid.node(static_cast<int>(i));
    const cdouble q = cdouble(w * w, 0.0) - lambda;
    c.u_d[i] = ds[i] / q;
    c.u_3[i] = s * c.u_s[i] / q;
  }
  return c;
}

double system_residual(cdouble lambda, double eps_check, const Grid1D& grid,
                       const ReconstructedComponents& c) {
  const size_t n = c.u_s.size();
  if (c.u_d.size() != n || c.u_3.size() != n ||
      n != static_cast<size_t>(grid.n))
    throw std::invalid_argument("system_residual: size mismatch");
  std::vector<cdouble> u1(n), u2(n);
  for (size_t i = 0; i < n; ++i) {
    u1[i] = 0.5 * (c.u_s[i] + c.u_d[i]);
    u2[i] = 0.5 * (c.u_s[i] - c.u_d[i]);
  }
  const auto d1 = derivative(u1, grid.h);
  const auto d2 = derivative(u2, grid.h);
  const double s = 1.0 / std::sqrt(2.0 * eps_check);
  std::vector<cdouble> r1(n), r2(n), r3(n);
  for (size_t i = 0; i < n; ++i) {
    const double w = grid.node(static_cast<int>(i));
    const cdouble q = cdouble(w * w, 0.0) - lambda;
    r1[i] = q * u1[i] - d1[i] + s * c.u_3[i];
    r2[i] = q * u2[i] + d2[i] + s * c.u_3[i];
    r3[i] = q * c.u_3[i] - s * (u1[i] + u2[i]);
  }
  const double scale = std::max(l2_norm(c.u_s, grid.h), 1e-300);
  double worst = 0.0;
  for (const auto* r : {&r1, &r2, &r3})
    worst = std::max(worst, l2_norm(*r, grid.h) / scale);
  return worst;
}

std::pair<double, double> energy_identity(cdouble lambda, double eps_check,
                                          const Grid1D& grid,
                                          const ReconstructedComponents& c) {
  const size_t n = c.u_s.size();
  if (n != static_cast<size_t>(grid.n))
    throw std::invalid_argument("energy_identity: size mismatch");
  const auto ds = derivative(c.u_s, grid.h);
  double t1 = 0.0, t2 = 0.0, rhs = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double w = grid.node(static_cast<int>(i));
    const double q2 = std::norm(cdouble(w * w, 0.0) - lambda);
    t1 += std::norm(ds[i]) / q2;
    t2 += std::norm(c.u_s[i]) / q2;
    rhs += std::norm(c.u_s[i]);
  }
  return {grid.h * (t1 + t2 / eps_check), grid.h * rhs};
}

} // namespace btspec
