#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pbicg/errors.hpp"
#include "pbicg/matcore/csr_matrix.hpp"

namespace pbicg {

/// |pivot| below this is a breakdown. No shifting or pivoting is attempted.
inline constexpr double ilu0_pivot_tolerance = 1e-300;

/// Factor selector for the split P = L U, with P_L = L and P_R = U.
enum class SplitOp {
  LeftInverse,             // L^{-1} v
  RightInverse,            // U^{-1} v
  LeftInverseTranspose,    // L^{-T} v
  RightInverseTranspose,   // U^{-T} v
  LeftMultiply,            // L v
  RightMultiply,           // U v
  LeftTransposeMultiply,   // L^T v
  RightTransposeMultiply,  // U^T v
};

/**
 * Zero fill-in incomplete LU factors of A.
 *
 * `lower` holds the strictly lower part of the unit-lower L; `upper` holds U
 * including its diagonal (first entry of each row). The union of both
 * patterns is exactly the pattern of A.
 */
struct Ilu0Factors {
  CsrMatrix lower;
  CsrMatrix upper;

  std::size_t size() const noexcept { return upper.size(); }
};

/// Row-wise (IKJ) ILU(0). Throws BreakdownError{"ilu0", k} when the k-th
/// pivot is structurally absent or |u_kk| < ilu0_pivot_tolerance.
inline Ilu0Factors ilu0_factorize(const CsrMatrix& A) {
  const std::size_t n = A.size();
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  std::vector<double> w(A.values().begin(), A.values().end());
  std::vector<std::size_t> diag(n);
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> where(n, unset);

  for (std::size_t i = 0; i < n; ++i) {
    auto d = A.find(i, i);
    if (!d) throw BreakdownError("ilu0", i);
    diag[i] = *d;

    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) where[ci[k]] = k;
    for (std::size_t k = rp[i]; k < rp[i + 1] && ci[k] < i; ++k) {
      const std::size_t piv_row = ci[k];
      w[k] /= w[diag[piv_row]];
      const double lik = w[k];
      for (std::size_t q = diag[piv_row] + 1; q < rp[piv_row + 1]; ++q) {
        const std::size_t pos = where[ci[q]];
        if (pos != unset) w[pos] -= lik * w[q];
      }
    }
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) where[ci[k]] = unset;

    if (!(std::abs(w[diag[i]]) >= ilu0_pivot_tolerance)) throw BreakdownError("ilu0", i);
  }

  std::vector<std::size_t> lrp(n + 1, 0), urp(n + 1, 0);
  std::vector<std::size_t> lci, uci;
  std::vector<double> lv, uv;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      if (ci[k] < i) {
        lci.push_back(ci[k]);
        lv.push_back(w[k]);
      } else {
        uci.push_back(ci[k]);
        uv.push_back(w[k]);
      }
    }
    lrp[i + 1] = lci.size();
    urp[i + 1] = uci.size();
  }
  return Ilu0Factors{CsrMatrix(n, std::move(lrp), std::move(lci), std::move(lv)),
                     CsrMatrix(n, std::move(urp), std::move(uci), std::move(uv))};
}

namespace detail {

// L y = v, unit diagonal.
inline void lower_solve(const CsrMatrix& L, std::span<double> y) {
  for (std::size_t i = 0; i < L.size(); ++i) {
    auto cols = L.row_cols(i);
    auto vals = L.row_values(i);
    double s = y[i];
    for (std::size_t k = 0; k < cols.size(); ++k) s -= vals[k] * y[cols[k]];
    y[i] = s;
  }
}

// U y = v, diagonal first in each row.
inline void upper_solve(const CsrMatrix& U, std::span<double> y) {
  for (std::size_t i = U.size(); i-- > 0;) {
    auto cols = U.row_cols(i);
    auto vals = U.row_values(i);
    double s = y[i];
    for (std::size_t k = 1; k < cols.size(); ++k) s -= vals[k] * y[cols[k]];
    y[i] = s / vals[0];
  }
}

// L^T y = v by column sweep from the bottom.
inline void lower_transpose_solve(const CsrMatrix& L, std::span<double> y) {
  for (std::size_t i = L.size(); i-- > 0;) {
    auto cols = L.row_cols(i);
    auto vals = L.row_values(i);
    const double yi = y[i];
    for (std::size_t k = 0; k < cols.size(); ++k) y[cols[k]] -= vals[k] * yi;
  }
}

// U^T y = v by column sweep from the top.
inline void upper_transpose_solve(const CsrMatrix& U, std::span<double> y) {
  for (std::size_t i = 0; i < U.size(); ++i) {
    auto cols = U.row_cols(i);
    auto vals = U.row_values(i);
    y[i] /= vals[0];
    const double yi = y[i];
    for (std::size_t k = 1; k < cols.size(); ++k) y[cols[k]] -= vals[k] * yi;
  }
}

} // namespace detail

inline Vector apply_split(const Ilu0Factors& F, SplitOp which, std::span<const double> v) {
  detail::require_same_size("apply_split", F.size(), v.size());
  Vector y(v.begin(), v.end());
  switch (which) {
    case SplitOp::LeftInverse: detail::lower_solve(F.lower, y); break;
    case SplitOp::RightInverse: detail::upper_solve(F.upper, y); break;
    case SplitOp::LeftInverseTranspose: detail::lower_transpose_solve(F.lower, y); break;
    case SplitOp::RightInverseTranspose: detail::upper_transpose_solve(F.upper, y); break;
    case SplitOp::LeftMultiply: add_scaled(y, 1.0, matvec(F.lower, v)); break;
    case SplitOp::RightMultiply: y = matvec(F.upper, v); break;
    case SplitOp::LeftTransposeMultiply: add_scaled(y, 1.0, matvec_transpose(F.lower, v)); break;
    case SplitOp::RightTransposeMultiply: y = matvec_transpose(F.upper, v); break;
  }
  return y;
}

/// P^{-1} v = U^{-1} (L^{-1} v)
inline Vector apply_minv(const Ilu0Factors& F, std::span<const double> v) {
  return apply_split(F, SplitOp::RightInverse, apply_split(F, SplitOp::LeftInverse, v));
}

/// P^{-T} v = L^{-T} (U^{-T} v)
inline Vector apply_minv_transpose(const Ilu0Factors& F, std::span<const double> v) {
  return apply_split(F, SplitOp::LeftInverseTranspose, apply_split(F, SplitOp::RightInverseTranspose, v));
}

} // namespace pbicg
