#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pbicg/krylov/types.hpp"
#include "pbicg/precond/preconditioner.hpp"

namespace pbicg::verify {

/// Largest normalised off-diagonal inner product over indices 0..k_range.
struct OrthoReport {
  double max_offdiag_biortho = 0.0;
  double max_offdiag_biconj = 0.0;
  std::size_t k_range = 0;
};

namespace detail {

using Op = std::function<Vector(std::span<const double>)>;

inline Vector same(std::span<const double> v) { return to_vector(v); }

/// Shadow-side and linear-side maps whose inner products are the
/// biorthogonality and biconjugacy pairs in the method's own variables.
struct InnerProductForm {
  Op shadow_r, linear_r;  // <shadow_r(r*_i), linear_r(r_j)>
  Op shadow_p, linear_p;  // <shadow_p(p*_i), linear_p(p_j)>
};

template <Preconditioner P>
InnerProductForm inner_product_form(Method method, const CsrMatrix& A, const P& prec) {
  const Op id = same;
  const Op a = [&A](std::span<const double> v) { return matvec(A, v); };
  const Op minv = [&prec](std::span<const double> v) { return prec.solve(v); };
  const Op minv_t = [&prec](std::span<const double> v) { return prec.solve_transpose(v); };
  switch (method) {
    case Method::Bicg: return {id, id, id, a};
    case Method::ConvertedLeft:
      return {id, id, id, [&A, &prec](std::span<const double> v) { return prec.solve(matvec(A, v)); }};
    case Method::ConvertedRight:
      return {id, id, id, [&A, &prec](std::span<const double> v) { return matvec(A, prec.solve(v)); }};
    case Method::ConvertedTwoSided:
      return {id, id, id, [&A, &prec](std::span<const double> v) {
                return prec.apply(SplitOp::LeftInverse, matvec(A, prec.apply(SplitOp::RightInverse, v)));
              }};
    // <r_flat_i, r_j>,  <p_flat_i, A P^{-1} p_j>
    case Method::PbicgRight:
      return {id, id, id, [&A, &prec](std::span<const double> v) { return matvec(A, prec.solve(v)); }};
    // <r*_i, r+_j>,  <p*_i, P^{-1} A p+_j>
    case Method::PbicgLeft:
      return {id, id, id, [&A, &prec](std::span<const double> v) { return prec.solve(matvec(A, v)); }};
    // <r*_i, P^{-1} r_j>,  <p_flat_i, A p+_j>
    case Method::PbicgStandard: return {id, minv, id, a};
    // <P^{-T} r*_i, r_j>,  <P^{-T} p*_i, A p+_j>
    case Method::PbicgImproved2: return {minv_t, id, minv_t, a};
    // <r*_i, A r_j>,  <A^T p*_i, A p_j>
    case Method::Bicr:
      return {id, a, [&A](std::span<const double> v) { return matvec_transpose(A, v); }, a};
  }
  throw std::invalid_argument("inner_product_form: unknown method");
}

inline double max_offdiag(const std::vector<Vector>& shadow, const std::vector<Vector>& linear,
                          const Op& fs, const Op& fl, std::size_t last) {
  std::vector<Vector> s, l;
  for (std::size_t i = 0; i <= last; ++i) {
    s.push_back(fs(shadow[i]));
    l.push_back(fl(linear[i]));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    for (std::size_t j = 0; j <= last; ++j) {
      if (i == j) continue;
      const double denom = norm2(s[i]) * norm2(l[j]);
      const double v = std::abs(dot(s[i], l[j]));
      worst = std::max(worst, denom > 0.0 ? v / denom : v);
    }
  }
  return worst;
}

inline std::size_t last_index(const IterationTrace& trace, std::size_t k_range) {
  if (!trace.vectors || trace.vectors->size() == 0) {
    throw std::invalid_argument("orthogonality check: trace has no vector history");
  }
  return std::min(k_range, trace.vectors->size() - 1);
}

} // namespace detail

/// max_{i != j <= k_range} |<r~*_i, r~_j>| / (||r~*_i|| ||r~_j||)
template <Preconditioner P>
OrthoReport check_biorthogonality(const CsrMatrix& A, const P& prec, const IterationTrace& trace,
                                  std::size_t k_range) {
  const std::size_t last = detail::last_index(trace, k_range);
  const auto form = detail::inner_product_form(trace.method, A, prec);
  OrthoReport rep;
  rep.k_range = last;
  rep.max_offdiag_biortho =
      detail::max_offdiag(trace.vectors->r_shadow, trace.vectors->r, form.shadow_r, form.linear_r, last);
  return rep;
}

/// max_{i != j <= k_range} |<p~*_i, A~ p~_j>| / (||p~*_i|| ||A~ p~_j||)
template <Preconditioner P>
OrthoReport check_biconjugacy(const CsrMatrix& A, const P& prec, const IterationTrace& trace,
                              std::size_t k_range) {
  const std::size_t last = detail::last_index(trace, k_range);
  const auto form = detail::inner_product_form(trace.method, A, prec);
  OrthoReport rep;
  rep.k_range = last;
  rep.max_offdiag_biconj =
      detail::max_offdiag(trace.vectors->p_shadow, trace.vectors->p, form.shadow_p, form.linear_p, last);
  return rep;
}

/// Both reports at once.
template <Preconditioner P>
OrthoReport check_orthogonality(const CsrMatrix& A, const P& prec, const IterationTrace& trace,
                                std::size_t k_range) {
  OrthoReport rep = check_biorthogonality(A, prec, trace, k_range);
  rep.max_offdiag_biconj = check_biconjugacy(A, prec, trace, k_range).max_offdiag_biconj;
  return rep;
}

} // namespace pbicg::verify
