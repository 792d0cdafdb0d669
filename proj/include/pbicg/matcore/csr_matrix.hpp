#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbicg/errors.hpp"
#include "pbicg/matcore/vector.hpp"

namespace pbicg {

/// One coordinate entry (0-based).
struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/**
 * Square sparse matrix in compressed-row form.
 *
 * Invariants (checked on construction): row_ptr has n+1 nondecreasing
 * entries starting at 0 and ending at nnz; column indices within a row are
 * strictly increasing and < n. Immutable once built.
 */
class CsrMatrix {
public:
  CsrMatrix() : row_ptr_(1, 0) {}

  CsrMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> col_idx,
            std::vector<double> values)
      : n_(n), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
    validate();
  }

  /// Builds from unordered coordinates; duplicate (row, col) entries are summed.
  static CsrMatrix from_triplets(std::size_t n, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
      if (t.row >= n || t.col >= n) {
        throw std::out_of_range("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                ") outside " + std::to_string(n) + "x" + std::to_string(n));
      }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> row_ptr(n + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& t = entries[k];
      if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
        vals.back() += t.value;
        continue;
      }
      cols.push_back(t.col);
      vals.push_back(t.value);
      ++row_ptr[t.row + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      row_ptr[i + 1] += row_ptr[i];
    }
    return CsrMatrix(n, std::move(row_ptr), std::move(cols), std::move(vals));
  }

  static CsrMatrix identity(std::size_t n) {
    std::vector<std::size_t> row_ptr(n + 1);
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i <= n; ++i) row_ptr[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    return CsrMatrix(n, std::move(row_ptr), std::move(cols), std::vector<double>(n, 1.0));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> row_cols(std::size_t i) const {
    return std::span<const std::size_t>(col_idx_).subspan(row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
  }
  std::span<const double> row_values(std::size_t i) const {
    return std::span<const double>(values_).subspan(row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
  }

  /// Storage position of (i, j), if structurally present.
  std::optional<std::size_t> find(std::size_t i, std::size_t j) const {
    auto cols = row_cols(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return std::nullopt;
    return row_ptr_[i] + static_cast<std::size_t>(it - cols.begin());
  }

  /// Value at (i, j); structural zeros read as 0.
  double at(std::size_t i, std::size_t j) const {
    auto pos = find(i, j);
    return pos ? values_[*pos] : 0.0;
  }

  CsrMatrix transpose() const {
    std::vector<std::size_t> row_ptr(n_ + 1, 0);
    for (auto c : col_idx_) ++row_ptr[c + 1];
    for (std::size_t i = 0; i < n_; ++i) row_ptr[i + 1] += row_ptr[i];
    std::vector<std::size_t> next(row_ptr.begin(), row_ptr.end() - 1);
    std::vector<std::size_t> cols(nnz());
    std::vector<double> vals(nnz());
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        auto dst = next[col_idx_[k]]++;
        cols[dst] = i;
        vals[dst] = values_[k];
      }
    }
    return CsrMatrix(n_, std::move(row_ptr), std::move(cols), std::move(vals));
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
  }

  bool operator==(const CsrMatrix&) const = default;

private:
  void validate() const {
    if (row_ptr_.size() != n_ + 1) {
      throw std::invalid_argument("CsrMatrix: row_ptr must have n+1 entries");
    }
    if (col_idx_.size() != values_.size()) {
      throw std::invalid_argument("CsrMatrix: col_idx and values lengths differ");
    }
    if (row_ptr_.front() != 0 || row_ptr_.back() != values_.size()) {
      throw std::invalid_argument("CsrMatrix: row_ptr must start at 0 and end at nnz");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (row_ptr_[i] > row_ptr_[i + 1]) {
        throw std::invalid_argument("CsrMatrix: row_ptr decreases at row " + std::to_string(i));
      }
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        if (col_idx_[k] >= n_) {
          throw std::invalid_argument("CsrMatrix: column index out of range in row " + std::to_string(i));
        }
        if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
          throw std::invalid_argument("CsrMatrix: columns not strictly increasing in row " + std::to_string(i));
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// y = A x, each row summed in stored column order.
inline void matvec(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  detail::require_same_size("matvec", A.size(), x.size());
  detail::require_same_size("matvec", A.size(), y.size());
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  const auto va = A.values();
  for (std::size_t i = 0; i < A.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      s += va[k] * x[ci[k]];
    }
    y[i] = s;
  }
}

inline Vector matvec(const CsrMatrix& A, std::span<const double> x) {
  Vector y(A.size());
  matvec(A, x, y);
  return y;
}

/// y = A^T x by scattering rows in order.
inline void matvec_transpose(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  detail::require_same_size("matvec_transpose", A.size(), x.size());
  detail::require_same_size("matvec_transpose", A.size(), y.size());
  std::fill(y.begin(), y.end(), 0.0);
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  const auto va = A.values();
  for (std::size_t i = 0; i < A.size(); ++i) {
    const double xi = x[i];
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      y[ci[k]] += va[k] * xi;
    }
  }
}

inline Vector matvec_transpose(const CsrMatrix& A, std::span<const double> x) {
  Vector y(A.size());
  matvec_transpose(A, x, y);
  return y;
}

} // namespace pbicg
