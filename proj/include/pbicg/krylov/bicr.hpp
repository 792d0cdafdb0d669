#pragma once

#include <span>

#include "pbicg/krylov/detail.hpp"
#include "pbicg/krylov/types.hpp"

namespace pbicg {

/**
 * Bi-conjugate residual method with coupled two-term recurrences and
 * shadow residual r*_0 = r_0:
 *
 *   alpha_k = <r*_k, A r_k> / <A^T p*_k, A p_k>
 *   x += alpha p,  r -= alpha A p,  r* -= alpha A^T p*
 *   beta_k  = <r*_{k+1}, A r_{k+1}> / <r*_k, A r_k>
 *   p = r + beta p,  A p = A r + beta A p   (and likewise for the shadow)
 *
 * Generates the same alpha/beta as BiCG started from r*_0 = A^T r_0.
 */
inline SolveResult bicr(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                        const SolverConfig& cfg) {
  detail::check_problem(A, b, x0, cfg);
  const std::size_t n = A.size();
  const double bnorm = detail::normaliser(norm2(b));
  const double btol = cfg.breakdown_tol;
  detail::TraceRecorder rec(A, b, Method::Bicr, cfg);

  Vector x = to_vector(x0);
  Vector r = subtract(b, matvec(A, x0));
  if (norm2(r) / bnorm <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);
  Vector rs = r;
  Vector Ar = matvec(A, r);
  Vector Atrs = matvec_transpose(A, rs);
  double rho = dot(rs, Ar);
  if (detail::vanishes(rho, norm2(rs), norm2(Ar), btol)) throw InitialShadowDegenerate(rho);

  Vector p(n, 0.0), ps(n, 0.0), Ap(n, 0.0), Atps(n, 0.0);
  double beta = 0.0;
  const std::size_t cap = cfg.iteration_cap(n);
  for (std::size_t k = 0; k < cap; ++k) {
    if (k > 0 && detail::vanishes(rho, norm2(rs), norm2(Ar), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"rho", k});
    }
    update_direction(p, r, beta);
    update_direction(ps, rs, beta);
    update_direction(Ap, Ar, beta);
    update_direction(Atps, Atrs, beta);
    const double sigma = dot(Atps, Ap);
    if (detail::vanishes(sigma, norm2(Atps), norm2(Ap), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"sigma", k});
    }
    const double alpha = rho / sigma;
    rec.snapshot(x, r, rs, p, ps);

    add_scaled(x, alpha, p);
    add_scaled(r, -alpha, Ap);
    const double relres = norm2(r) / bnorm;
    rec.push(alpha, relres, rec.true_relres(x));
    if (relres <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);

    add_scaled(rs, -alpha, Atps);
    Ar = matvec(A, r);
    Atrs = matvec_transpose(A, rs);
    const double rho_next = dot(rs, Ar);
    beta = rho_next / rho;
    rho = rho_next;
    rec.set_beta(beta);
  }
  return rec.finish(std::move(x), SolveStatus::MaxIter);
}

} // namespace pbicg
