#pragma once

#include <span>

#include "pbicg/krylov/detail.hpp"
#include "pbicg/krylov/isrv.hpp"
#include "pbicg/krylov/types.hpp"
#include "pbicg/precond/preconditioner.hpp"

namespace pbicg {

namespace detail {

// A system object fixes the conversion A~ x~ = b~ of the original A x = b:
// how x~_0 and r~_0 are formed, how A~ and A~^T act, how x is recovered
// from x~, and which norm of r~ is compared against the tolerance.

struct PlainSystem {
  const CsrMatrix* A;

  Vector initial_x(std::span<const double> x0) const { return to_vector(x0); }
  Vector initial_residual(std::span<const double> b, std::span<const double> x0) const {
    return subtract(b, matvec(*A, x0));
  }
  Vector apply(std::span<const double> v) const { return matvec(*A, v); }
  Vector apply_transpose(std::span<const double> v) const { return matvec_transpose(*A, v); }
  Vector original_x(std::span<const double> xt) const { return to_vector(xt); }
  double adjusted_norm(std::span<const double> r) const { return norm2(r); }
};

// A~ = P^{-1} A, x~ = x, b~ = P^{-1} b; adjusted norm ||P r~||.
template <Preconditioner P>
struct LeftSystem {
  const CsrMatrix* A;
  const P* prec;

  Vector initial_x(std::span<const double> x0) const { return to_vector(x0); }
  Vector initial_residual(std::span<const double> b, std::span<const double> x0) const {
    return prec->solve(subtract(b, matvec(*A, x0)));
  }
  Vector apply(std::span<const double> v) const { return prec->solve(matvec(*A, v)); }
  Vector apply_transpose(std::span<const double> v) const { return matvec_transpose(*A, prec->solve_transpose(v)); }
  Vector original_x(std::span<const double> xt) const { return to_vector(xt); }
  double adjusted_norm(std::span<const double> r) const { return norm2(prec->multiply(r)); }
};

// A~ = A P^{-1}, x~ = P x, b~ = b; adjusted norm ||r~||.
template <Preconditioner P>
struct RightSystem {
  const CsrMatrix* A;
  const P* prec;

  Vector initial_x(std::span<const double> x0) const { return prec->multiply(x0); }
  Vector initial_residual(std::span<const double> b, std::span<const double> x0) const {
    return subtract(b, matvec(*A, x0));
  }
  Vector apply(std::span<const double> v) const { return matvec(*A, prec->solve(v)); }
  Vector apply_transpose(std::span<const double> v) const { return prec->solve_transpose(matvec_transpose(*A, v)); }
  Vector original_x(std::span<const double> xt) const { return prec->solve(xt); }
  double adjusted_norm(std::span<const double> r) const { return norm2(r); }
};

// A~ = P_L^{-1} A P_R^{-1}, x~ = P_R x, b~ = P_L^{-1} b; adjusted norm ||P_L r~||.
template <SplitPreconditioner S>
struct TwoSidedSystem {
  const CsrMatrix* A;
  const S* split;

  Vector initial_x(std::span<const double> x0) const { return split->right_multiply(x0); }
  Vector initial_residual(std::span<const double> b, std::span<const double> x0) const {
    return split->left_solve(subtract(b, matvec(*A, x0)));
  }
  Vector apply(std::span<const double> v) const {
    return split->left_solve(matvec(*A, split->right_solve(v)));
  }
  Vector apply_transpose(std::span<const double> v) const {
    return split->right_solve_transpose(matvec_transpose(*A, split->left_solve_transpose(v)));
  }
  Vector original_x(std::span<const double> xt) const { return split->right_solve(xt); }
  double adjusted_norm(std::span<const double> r) const { return norm2(split->left_multiply(r)); }
};

/// BiCG on the converted system, recurrences verbatim in the tilde variables.
template <class System, class ShadowFn>
SolveResult run_converted_bicg(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                               const System& sys, ShadowFn&& make_shadow, Method method,
                               const SolverConfig& cfg) {
  check_problem(A, b, x0, cfg);
  const std::size_t n = A.size();
  const double bnorm = normaliser(norm2(b));
  const double btol = cfg.breakdown_tol;
  TraceRecorder rec(A, b, method, cfg);

  Vector x = sys.initial_x(x0);
  Vector r = sys.initial_residual(b, x0);
  if (sys.adjusted_norm(r) / bnorm <= cfg.tol) {
    return rec.finish(sys.original_x(x), SolveStatus::Converged);
  }
  Vector rs = make_shadow(r);
  double rho = dot(rs, r);
  if (vanishes(rho, norm2(rs), norm2(r), btol)) throw InitialShadowDegenerate(rho);

  Vector p(n, 0.0), ps(n, 0.0);
  double beta = 0.0;  // beta_{-1}
  const std::size_t cap = cfg.iteration_cap(n);
  for (std::size_t k = 0; k < cap; ++k) {
    if (k > 0 && vanishes(rho, norm2(rs), norm2(r), btol)) {
      return rec.finish(sys.original_x(x), SolveStatus::Breakdown, BreakdownInfo{"rho", k});
    }
    update_direction(p, r, beta);
    update_direction(ps, rs, beta);
    const Vector q = sys.apply(p);
    const double sigma = dot(ps, q);
    if (vanishes(sigma, norm2(ps), norm2(q), btol)) {
      return rec.finish(sys.original_x(x), SolveStatus::Breakdown, BreakdownInfo{"sigma", k});
    }
    const double alpha = rho / sigma;
    rec.snapshot(x, r, rs, p, ps);

    add_scaled(x, alpha, p);
    add_scaled(r, -alpha, q);
    Vector x_orig = sys.original_x(x);
    const double relres = sys.adjusted_norm(r) / bnorm;
    rec.push(alpha, relres, rec.true_relres(x_orig));
    if (relres <= cfg.tol) return rec.finish(std::move(x_orig), SolveStatus::Converged);

    add_scaled(rs, -alpha, sys.apply_transpose(ps));
    const double rho_next = dot(rs, r);
    beta = rho_next / rho;
    rho = rho_next;
    rec.set_beta(beta);
  }
  return rec.finish(sys.original_x(x), SolveStatus::MaxIter);
}

} // namespace detail

/// Unpreconditioned BiCG. With P = I every ISRV except AtR0 and Custom
/// reduces to r*_0 = r_0.
inline SolveResult bicg(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                        const IsrvSpec& isrv, const SolverConfig& cfg) {
  const IdentityPreconditioner id(A.size());
  return detail::run_converted_bicg(
      A, b, x0, detail::PlainSystem{&A},
      [&](const Vector& r0) { return make_shadow_residual(isrv, A, id, r0); }, Method::Bicg, cfg);
}

/// BiCG on A~ = P_L^{-1} A P_R^{-1} for an arbitrary split, with r~*_0 = r~_0.
template <SplitPreconditioner S>
SolveResult bicg_two_sided(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                           const S& split, const SolverConfig& cfg, Method tag = Method::ConvertedTwoSided) {
  detail::require_same_size("preconditioner", A.size(), split.size());
  return detail::run_converted_bicg(A, b, x0, detail::TwoSidedSystem<S>{&A, &split},
                                    [](const Vector& r0) { return r0; }, tag, cfg);
}

/**
 * BiCG with the system converted explicitly in the given direction and the
 * shadow residual set to r~*_0 = r~_0.
 *
 * Left and Right use dedicated operators (P^{-1} A and A P^{-1}); TwoSided
 * goes through the factor split P_L = L, P_R = U. The returned x is always
 * in the original variables. relres_alg is ||P r~||/||b|| (left), ||r~||/||b||
 * (right), ||P_L r~||/||b|| (two-sided), and ||r||/||b|| for None.
 */
template <Preconditioner P>
SolveResult bicg_converted(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                           const P& prec, PrecSide side, const SolverConfig& cfg) {
  detail::require_same_size("preconditioner", A.size(), prec.size());
  const auto same = [](const Vector& r0) { return r0; };
  switch (side) {
    case PrecSide::None:
      return detail::run_converted_bicg(A, b, x0, detail::PlainSystem{&A}, same, Method::Bicg, cfg);
    case PrecSide::Left:
      return detail::run_converted_bicg(A, b, x0, detail::LeftSystem<P>{&A, &prec}, same,
                                        Method::ConvertedLeft, cfg);
    case PrecSide::Right:
      return detail::run_converted_bicg(A, b, x0, detail::RightSystem<P>{&A, &prec}, same,
                                        Method::ConvertedRight, cfg);
    case PrecSide::TwoSided: {
      const FactorSplit<P> split(prec);
      return bicg_two_sided(A, b, x0, split, cfg, Method::ConvertedTwoSided);
    }
  }
  throw std::invalid_argument("bicg_converted: unknown side");
}

} // namespace pbicg
