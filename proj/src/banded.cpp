// SPDX-License-Identifier: Apache-2.0
#include "btspec/banded.hpp"

#include <cmath>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace btspec {

ComplexBandedMatrix::ComplexBandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku) {
  if (n < 1 || kl < 0 || ku < 0)
    throw std::invalid_argument("banded: bad dimensions");
  data_.assign(static_cast<size_t>(n) * (kl + ku + 1), cdouble{});
}

void ComplexBandedMatrix::set(int i, int j, cdouble v) {
  if (!inside(i, j)) throw std::out_of_range("banded set: outside band");
  data_[static_cast<size_t>(idx(i, j))] = v;
}

void ComplexBandedMatrix::add(int i, int j, cdouble v) {
  if (!inside(i, j)) throw std::out_of_range("banded add: outside band");
  data_[static_cast<size_t>(idx(i, j))] += v;
}

ComplexBandedMatrix ComplexBandedMatrix::shifted(cdouble shift) const {
  ComplexBandedMatrix out = *this;
  for (int i = 0; i < n_; ++i) out.add(i, i, -shift);
  return out;
}

std::vector<cdouble> ComplexBandedMatrix::matvec(const std::vector<cdouble>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("banded matvec: size mismatch");
  std::vector<cdouble> y(static_cast<size_t>(n_), cdouble{});
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    const cdouble xj = x[static_cast<size_t>(j)];
    for (int i = ilo; i <= ihi; ++i)
      y[static_cast<size_t>(i)] += data_[static_cast<size_t>(idx(i, j))] * xj;
  }
  return y;
}

std::vector<cdouble>
ComplexBandedMatrix::matvec_conj_transpose(const std::vector<cdouble>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("banded matvec: size mismatch");
  std::vector<cdouble> y(static_cast<size_t>(n_), cdouble{});
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    cdouble s{};
    for (int i = ilo; i <= ihi; ++i)
      s += std::conj(data_[static_cast<size_t>(idx(i, j))]) * x[static_cast<size_t>(i)];
    y[static_cast<size_t>(j)] = s;
  }
  return y;
}

std::vector<cdouble> ComplexBandedMatrix::to_dense() const {
  std::vector<cdouble> d(static_cast<size_t>(n_) * n_, cdouble{});
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i)
      d[static_cast<size_t>(j) * n_ + i] = data_[static_cast<size_t>(idx(i, j))];
  }
  return d;
}

double ComplexBandedMatrix::norm_inf() const {
  std::vector<double> rowsum(static_cast<size_t>(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i)
      rowsum[static_cast<size_t>(i)] += std::abs(data_[static_cast<size_t>(idx(i, j))]);
  }
  double m = 0.0;
  for (double s : rowsum) m = std::max(m, s);
  return m;
}

BandedLU::BandedLU(const ComplexBandedMatrix& m)
    : n_(m.n()), kl_(m.kl()), ku_(m.ku()), ldab_(2 * m.kl() + m.ku() + 1),
      ab_(static_cast<size_t>(m.n()) * (2 * m.kl() + m.ku() + 1), cdouble{}),
      ipiv_(static_cast<size_t>(m.n()), 0) {
  // zgbtrf expects the matrix in rows kl..kl+ku+kl of each column, with kl
  // extra rows on top for fill-in.
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - ku_);
    const int ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i)
      ab_[static_cast<size_t>(j) * ldab_ + kl_ + ku_ + i - j] = m.at(i, j);
  }
  const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
                                         ab_.data(), ldab_, ipiv_.data());
  if (info > 0) throw SingularMatrixError(static_cast<int>(info) - 1);
  if (info < 0) throw std::runtime_error("zgbtrf: illegal argument");
  // Exact zeros are caught above; also reject pivots far below the matrix
  // scale, which make the solves meaningless.
  double scale = 0.0;
  for (const auto& z : ab_) scale = std::max(scale, std::abs(z));
  for (int i = 0; i < n_; ++i) {
    const double piv = std::abs(ab_[static_cast<size_t>(i) * ldab_ + kl_ + ku_]);
    if (!(piv > scale * 1e-300)) throw SingularMatrixError(i);
  }
}

void BandedLU::solve_inplace(std::vector<cdouble>& x, char trans) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("banded solve: size mismatch");
  const lapack_int info =
      LAPACKE_zgbtrs(LAPACK_COL_MAJOR, trans, n_, kl_, ku_, 1, ab_.data(),
                     ldab_, ipiv_.data(), x.data(), n_);
  if (info != 0) throw std::runtime_error("zgbtrs failed");
}

std::vector<cdouble> BandedLU::solve(const std::vector<cdouble>& rhs) const {
  std::vector<cdouble> x = rhs;
  solve_inplace(x, 'N');
  return x;
}

std::vector<cdouble>
BandedLU::solve_conj_transpose(const std::vector<cdouble>& rhs) const {
  std::vector<cdouble> x = rhs;
  solve_inplace(x, 'C');
  return x;
}

} // namespace btspec
