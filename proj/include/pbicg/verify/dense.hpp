#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbicg/matcore/csr_matrix.hpp"

namespace pbicg::verify {

/// Row-major dense copy of A.
inline std::vector<double> to_dense(const CsrMatrix& A) {
  const std::size_t n = A.size();
  std::vector<double> D(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = A.row_cols(i);
    const auto vals = A.row_values(i);
    for (std::size_t t = 0; t < cols.size(); ++t) D[i * n + cols[t]] = vals[t];
  }
  return D;
}

/// Gaussian elimination with partial pivoting on a row-major n x n matrix.
inline Vector dense_solve(std::vector<double> D, std::span<const double> b) {
  const std::size_t n = b.size();
  if (D.size() != n * n) throw std::invalid_argument("dense_solve: matrix is not n x n");
  Vector x = to_vector(b);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(D[i * n + k]) > std::abs(D[piv * n + k])) piv = i;
    }
    if (D[piv * n + k] == 0.0) throw std::invalid_argument("dense_solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(D[k * n + j], D[piv * n + j]);
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = D[i * n + k] / D[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) D[i * n + j] -= f * D[k * n + j];
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= D[k * n + j] * x[j];
    x[k] = s / D[k * n + k];
  }
  return x;
}

} // namespace pbicg::verify
