// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string>
#include <vector>

namespace btspec {

using cdouble = std::complex<double>;

// Square dense complex matrix, column-major storage.
class DenseComplexMatrix {
public:
  DenseComplexMatrix() = default;
  explicit DenseComplexMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {}

  int n() const { return n_; }
  cdouble& at(int i, int j) { return data_[static_cast<size_t>(j) * n_ + i]; }
  cdouble at(int i, int j) const { return data_[static_cast<size_t>(j) * n_ + i]; }
  cdouble* data() { return data_.data(); }
  const cdouble* data() const { return data_.data(); }

  std::vector<cdouble> matvec(const std::vector<cdouble>& x) const;

private:
  int n_ = 0;
  std::vector<cdouble> data_;
};

struct EigenResult {
  std::vector<cdouble> eigenvalues;
  std::vector<double> residuals; // empty unless residuals were requested
  std::string method;            // "dense_qr" or "shift_invert"
};

inline constexpr int kDenseCap = 2000;

// All eigenvalues of m (implicitly shifted QR on the Hessenberg form).
// Throws on non-convergence or when n exceeds the dense cap.
EigenResult dense_eigenvalues(const DenseComplexMatrix& m, double tol);

} // namespace btspec
