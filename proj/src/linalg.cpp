// SPDX-License-Identifier: Apache-2.0
#include "btspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace btspec {

namespace {

double norm2(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void scale(std::vector<cdouble>& v, double f) {
  for (auto& z : v) z *= f;
}

cdouble dot_conj(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  cdouble s{};
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

} // namespace

ShiftInvertResult shift_invert_eigenvalue(const ComplexBandedMatrix& m,
                                          cdouble shift, double tol,
                                          int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("shift_invert: tol must be positive");
  const int n = m.n();
  const double anorm = std::max(1.0, m.norm_inf());

  cdouble sigma = shift;
  std::unique_ptr<BandedLU> lu;
  try {
    lu = std::make_unique<BandedLU>(m.shifted(sigma));
  } catch (const SingularMatrixError&) {
    // The shift is an eigenvalue of the discretized matrix to working
    // precision; report it directly.
    ShiftInvertResult r;
    r.eigenvalue = shift;
    r.residual = 0.0;
    r.shift_is_eigenvalue = true;
    return r;
  }

  std::vector<cdouble> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<size_t>(i)] = cdouble(1.0 + 0.0001 * i, 0.5);
  scale(v, 1.0 / norm2(v));

  cdouble best_lambda = shift;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<cdouble> best_v = v;

  for (int it = 0; it < max_iter; ++it) {
    std::vector<cdouble> w;
    try {
      w = lu->solve(v);
    } catch (const std::exception&) {
      break;
    }
    const double wn = norm2(w);
    if (!(wn > 0.0) || !std::isfinite(wn)) break;
    scale(w, 1.0 / wn);
    // Rayleigh quotient of the original matrix at the iterate.
    const std::vector<cdouble> aw = m.matvec(w);
    const cdouble lambda = dot_conj(w, aw);
    std::vector<cdouble> r = aw;
    for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)] -= lambda * w[static_cast<size_t>(i)];
    const double res = norm2(r) / anorm;
    if (res < best_res) {
      best_res = res;
      best_lambda = lambda;
      best_v = w;
    }
    if (res <= tol) {
      ShiftInvertResult out;
      out.eigenvalue = lambda;
      out.residual = res;
      out.eigenvector = std::move(w);
      return out;
    }
    v = std::move(w);
    // Periodic Rayleigh refinement of the shift sharpens convergence for
    // clustered eigenvalues.
    if ((it + 1) % 8 == 0 && std::abs(lambda - sigma) > 10.0 * tol) {
      try {
        auto refined = std::make_unique<BandedLU>(m.shifted(lambda));
        lu = std::move(refined);
        sigma = lambda;
      } catch (const SingularMatrixError&) {
        ShiftInvertResult out;
        out.eigenvalue = lambda;
        out.residual = res;
        out.eigenvector = v;
        out.shift_is_eigenvalue = true;
        return out;
      }
    }
  }
  throw ConvergenceError("shift_invert_eigenvalue: no convergence in " +
                             std::to_string(max_iter) + " iterations",
                         best_lambda, best_res);
}

double smallest_singular_value(const ComplexBandedMatrix& m, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("smallest_singular_value: tol > 0 required");
  const int n = m.n();
  std::unique_ptr<BandedLU> lu;
  try {
    lu = std::make_unique<BandedLU>(m);
  } catch (const SingularMatrixError&) {
    return 0.0;
  }
  std::vector<cdouble> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<size_t>(i)] = cdouble(0.7 + 0.001 * i, -0.3);
  scale(v, 1.0 / norm2(v));

  // Power iteration on (A^H A)^{-1}: each step solves A w = v, then A^H z = w.
  // The iterate's growth factor converges to 1/sigma_min^2.
  double sigma_prev = -1.0;
  const int max_iter = 500;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<cdouble> w = lu->solve(v);
    std::vector<cdouble> z = lu->solve_conj_transpose(w);
    const double zn = norm2(z);
    if (!(zn > 0.0) || !std::isfinite(zn)) return 0.0;
    const double sigma = 1.0 / std::sqrt(zn);
    scale(z, 1.0 / zn);
    v = std::move(z);
    if (sigma_prev > 0.0 &&
        std::abs(sigma - sigma_prev) <= tol * std::max(sigma, sigma_prev))
      return sigma;
    sigma_prev = sigma;
  }
  return sigma_prev;
}

std::vector<std::optional<size_t>>
match_to_targets(const std::vector<cdouble>& values,
                 const std::vector<cdouble>& targets) {
  std::vector<std::optional<size_t>> out(targets.size());
  std::vector<bool> used(values.size(), false);
  for (size_t t = 0; t < targets.size(); ++t) {
    std::optional<size_t> pick;
    double best = std::numeric_limits<double>::infinity();
    for (size_t v = 0; v < values.size(); ++v) {
      if (used[v]) continue;
      const double d = std::abs(values[v] - targets[t]);
      const bool better =
          d < best ||
          (d == best && pick && std::abs(values[v].imag()) < std::abs(values[*pick].imag()));
      if (better) {
        best = d;
        pick = v;
      }
    }
    if (pick) {
      used[*pick] = true;
      out[t] = pick;
    }
  }
  return out;
}

} // namespace btspec
