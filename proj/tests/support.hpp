#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pbicg/pbicg.hpp"

namespace testing_support {

using pbicg::CsrMatrix;
using pbicg::Vector;

/// Row-major dense matrix for reference computations.
struct Dense {
  std::size_t n = 0;
  std::vector<double> a;

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline Dense dense_of(const CsrMatrix& A) {
  Dense D{A.size(), std::vector<double>(A.size() * A.size(), 0.0)};
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto cols = A.row_cols(i);
    const auto vals = A.row_values(i);
    for (std::size_t t = 0; t < cols.size(); ++t) D(i, cols[t]) = vals[t];
  }
  return D;
}

inline CsrMatrix csr_of(const Dense& D) {
  std::vector<pbicg::Triplet> t;
  for (std::size_t i = 0; i < D.n; ++i) {
    for (std::size_t j = 0; j < D.n; ++j) {
      if (D(i, j) != 0.0) t.push_back({i, j, D(i, j)});
    }
  }
  return CsrMatrix::from_triplets(D.n, std::move(t));
}

inline Vector dense_matvec(const Dense& D, const Vector& x) {
  Vector y(D.n, 0.0);
  for (std::size_t i = 0; i < D.n; ++i) {
    for (std::size_t j = 0; j < D.n; ++j) y[i] += D(i, j) * x[j];
  }
  return y;
}

inline Vector dense_matvec_transpose(const Dense& D, const Vector& x) {
  Vector y(D.n, 0.0);
  for (std::size_t i = 0; i < D.n; ++i) {
    for (std::size_t j = 0; j < D.n; ++j) y[j] += D(i, j) * x[i];
  }
  return y;
}

inline Vector random_vector(std::size_t n, pbicg::SeededUniform& rng) {
  Vector v(n);
  for (auto& e : v) e = rng.next(-1.0, 1.0);
  return v;
}

inline double rel_diff(const Vector& a, const Vector& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline Vector ones(std::size_t n) { return Vector(n, 1.0); }
inline Vector zeros(std::size_t n) { return Vector(n, 0.0); }

} // namespace testing_support
