// SPDX-License-Identifier: Apache-2.0
#include "btspec/dense.hpp"

#include <stdexcept>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace btspec {

std::vector<cdouble> DenseComplexMatrix::matvec(const std::vector<cdouble>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("dense matvec: size mismatch");
  std::vector<cdouble> y(static_cast<size_t>(n_), cdouble{});
  for (int j = 0; j < n_; ++j) {
    const cdouble xj = x[static_cast<size_t>(j)];
    const cdouble* col = data_.data() + static_cast<size_t>(j) * n_;
    for (int i = 0; i < n_; ++i) y[static_cast<size_t>(i)] += col[i] * xj;
  }
  return y;
}

EigenResult dense_eigenvalues(const DenseComplexMatrix& m, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("dense_eigenvalues: tol must be positive");
  const int n = m.n();
  if (n < 1) throw std::invalid_argument("dense_eigenvalues: empty matrix");
  if (n > kDenseCap)
    throw std::invalid_argument("dense_eigenvalues: dimension exceeds dense cap " +
                                std::to_string(kDenseCap) +
                                ", use shift-invert instead");
  std::vector<cdouble> a(m.data(), m.data() + static_cast<size_t>(n) * n);
  std::vector<cdouble> w(static_cast<size_t>(n));
  // jobvl/jobvr 'N': LAPACKE still insists on ldvl/ldvr >= n.
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                    nullptr, n, nullptr, n);
  if (info < 0) throw std::runtime_error("zgeev: illegal argument");
  if (info > 0)
    throw std::runtime_error("dense_eigenvalues: QR iteration failed to converge");
  EigenResult r;
  r.eigenvalues = std::move(w);
  r.method = "dense_qr";
  return r;
}

} // namespace btspec
