#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pbicg/krylov/types.hpp"
#include "pbicg/precond/preconditioner.hpp"

namespace pbicg::verify {

/// Coefficients (z^0 first) of the residual polynomials R_k and direction
/// polynomials P_k, k = 0..K.
struct PolynomialTrace {
  std::vector<std::vector<double>> R;
  std::vector<std::vector<double>> P;
};

/**
 * Scalar recurrences
 *   R_0 = P_0 = 1,
 *   R_k = R_{k-1} - alpha_{k-1} z P_{k-1},
 *   P_k = R_k + beta_{k-1} P_{k-1}.
 * A NaN final beta (converged run) only affects the last P.
 */
inline PolynomialTrace polynomial_trace(std::span<const double> alphas, std::span<const double> betas) {
  if (alphas.size() != betas.size()) {
    throw std::invalid_argument("polynomial_trace: alpha and beta series differ in length");
  }
  PolynomialTrace out;
  out.R.push_back({1.0});
  out.P.push_back({1.0});
  for (std::size_t k = 1; k <= alphas.size(); ++k) {
    const auto& Rprev = out.R[k - 1];
    const auto& Pprev = out.P[k - 1];
    std::vector<double> R(k + 1, 0.0);
    for (std::size_t j = 0; j < Rprev.size(); ++j) R[j] = Rprev[j];
    for (std::size_t j = 0; j < Pprev.size(); ++j) R[j + 1] -= alphas[k - 1] * Pprev[j];
    std::vector<double> P = R;
    for (std::size_t j = 0; j < Pprev.size(); ++j) P[j] += betas[k - 1] * Pprev[j];
    out.R.push_back(std::move(R));
    out.P.push_back(std::move(P));
  }
  return out;
}

/// Horner evaluation of sum_j c_j M^j v, one operator application per
/// degree. Loses accuracy once |R_k(M) v| is small next to the coefficient
/// mass; residual checks use evaluate_residual_polynomials instead.
inline Vector evaluate_polynomial(std::span<const double> coeffs,
                                  const std::function<Vector(std::span<const double>)>& op,
                                  std::span<const double> v) {
  if (coeffs.empty()) return Vector(v.size(), 0.0);
  Vector y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) y[i] = coeffs.back() * v[i];
  for (std::size_t j = coeffs.size() - 1; j-- > 0;) {
    y = op(y);
    add_scaled(y, coeffs[j], v);
  }
  return y;
}

/**
 * R_k(M) v for k = 0..alphas.size(), evaluated through the coupled scalar
 * recurrences with M applied step by step:
 *   y_0 = d_0 = v,  y_k = y_{k-1} - alpha_{k-1} M d_{k-1},  d_k = y_k + beta_{k-1} d_{k-1}.
 * No matrix powers are formed.
 */
inline std::vector<Vector> evaluate_residual_polynomials(std::span<const double> alphas,
                                                         std::span<const double> betas,
                                                         const std::function<Vector(std::span<const double>)>& op,
                                                         std::span<const double> v) {
  if (alphas.size() != betas.size()) {
    throw std::invalid_argument("evaluate_residual_polynomials: alpha and beta series differ in length");
  }
  std::vector<Vector> out;
  out.push_back(to_vector(v));
  Vector d = to_vector(v);
  for (std::size_t k = 1; k <= alphas.size(); ++k) {
    Vector y = out.back();
    add_scaled(y, -alphas[k - 1], op(d));
    if (k < alphas.size()) update_direction(d, y, betas[k - 1]);
    out.push_back(std::move(y));
  }
  return out;
}

namespace detail {

using Op = std::function<Vector(std::span<const double>)>;

/// The residual of `method` at step k as  outer( R_k(M) start ).
struct ResidualStructure {
  Op M;
  Vector start;
  Op outer;  // identity when empty
};

template <Preconditioner P>
ResidualStructure residual_structure(Method method, const CsrMatrix& A, const P& prec, const Vector& r0) {
  const Op plain = [&A](std::span<const double> v) { return matvec(A, v); };
  const Op left = [&A, &prec](std::span<const double> v) { return prec.solve(matvec(A, v)); };
  const Op right = [&A, &prec](std::span<const double> v) { return matvec(A, prec.solve(v)); };
  switch (method) {
    case Method::Bicg:
    case Method::Bicr: return {plain, r0, {}};
    case Method::ConvertedLeft:
    case Method::PbicgLeft: return {left, r0, {}};
    case Method::ConvertedRight:
    case Method::PbicgRight: return {right, r0, {}};
    case Method::ConvertedTwoSided:
      return {[&A, &prec](std::span<const double> v) {
                return prec.apply(SplitOp::LeftInverse, matvec(A, prec.apply(SplitOp::RightInverse, v)));
              },
              r0, {}};
    case Method::PbicgStandard:
    case Method::PbicgImproved2:
      // r_k = P R_k(P^{-1} A) P^{-1} r_0
      return {left, prec.solve(r0), [&prec](std::span<const double> v) { return prec.multiply(v); }};
  }
  throw std::invalid_argument("residual_structure: unknown method");
}

} // namespace detail

/**
 * Rebuilds each recorded residual (in the method's own variables) from the
 * alpha/beta history and the method's polynomial structure alone, and returns
 *   max_k ||r_k(iterated) - r_k(polynomial)|| / ||r_k(iterated)||,  k <= k_max.
 * Needs a trace recorded with vectors.
 */
template <Preconditioner P>
double check_polynomial_consistency(const CsrMatrix& A, const P& prec, const IterationTrace& trace,
                                    std::size_t k_max = 10) {
  if (!trace.vectors || trace.vectors->size() == 0) {
    throw std::invalid_argument("check_polynomial_consistency: trace has no vector history");
  }
  const auto& hist = *trace.vectors;
  const auto structure = detail::residual_structure(trace.method, A, prec, hist.r[0]);
  const std::size_t last = std::min(k_max, hist.size() - 1);
  const auto rebuilt_all = evaluate_residual_polynomials(
      std::span<const double>(trace.alphas).first(last), std::span<const double>(trace.betas).first(last),
      structure.M, structure.start);

  double worst = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    Vector rebuilt = rebuilt_all[k];
    if (structure.outer) rebuilt = structure.outer(rebuilt);
    const double scale = norm2(hist.r[k]);
    const double err = norm2(subtract(hist.r[k], rebuilt));
    worst = std::max(worst, scale > 0.0 ? err / scale : err);
  }
  return worst;
}

} // namespace pbicg::verify
