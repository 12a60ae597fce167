// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

namespace btspec {

using cdouble = std::complex<double>;

struct SingularMatrixError : std::runtime_error {
  int pivot_index; // 0-based row of the offending pivot
  explicit SingularMatrixError(int idx)
      : std::runtime_error("numerically singular pivot at index " +
                           std::to_string(idx)),
        pivot_index(idx) {}
};

struct ConvergenceError : std::runtime_error {
  cdouble best_value{};
  double best_residual = 0.0;
  ConvergenceError(const std::string& what, cdouble best, double residual)
      : std::runtime_error(what), best_value(best), best_residual(residual) {}
};

// Square banded complex matrix, band storage: entry (i,j) with
// -kl <= i-j <= ku lives at data[j*(kl+ku+1) + ku + i - j].
class ComplexBandedMatrix {
public:
  ComplexBandedMatrix() = default;
  ComplexBandedMatrix(int n, int kl, int ku);

  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  cdouble at(int i, int j) const {
    return inside(i, j) ? data_[idx(i, j)] : cdouble{};
  }
  void set(int i, int j, cdouble v);
  void add(int i, int j, cdouble v);

  // this - shift*I
  ComplexBandedMatrix shifted(cdouble shift) const;

  std::vector<cdouble> matvec(const std::vector<cdouble>& x) const;
  std::vector<cdouble> matvec_conj_transpose(const std::vector<cdouble>& x) const;

  std::vector<cdouble> to_dense() const; // column-major n x n

  double norm_inf() const; // max absolute row sum

  bool operator==(const ComplexBandedMatrix& o) const = default;

private:
  bool inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ && j - i <= ku_;
  }
  int idx(int i, int j) const { return j * (kl_ + ku_ + 1) + ku_ + i - j; }

  int n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<cdouble> data_;
};

// LU with partial pivoting in LAPACK band storage (zgbtrf/zgbtrs).
// Throws SingularMatrixError on a numerically singular pivot.
class BandedLU {
public:
  explicit BandedLU(const ComplexBandedMatrix& m);

  int n() const { return n_; }

  // Solve A x = rhs.
  std::vector<cdouble> solve(const std::vector<cdouble>& rhs) const;
  // Solve A^H x = rhs.
  std::vector<cdouble> solve_conj_transpose(const std::vector<cdouble>& rhs) const;

private:
  void solve_inplace(std::vector<cdouble>& x, char trans) const;

  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<cdouble> ab_;
  std::vector<int> ipiv_;
};

} // namespace btspec
