#pragma once

#include <span>

#include "pbicg/krylov/detail.hpp"
#include "pbicg/krylov/isrv.hpp"
#include "pbicg/krylov/types.hpp"
#include "pbicg/precond/preconditioner.hpp"

// The four preconditioned BiCG algorithms. All of them work on the original
// x, and each iteration applies exactly one P^{-1} and one P^{-T}; they
// differ in where those operators sit relative to the inner products and in
// the initial shadow residual.

namespace pbicg {

/**
 * PBiCG corresponding to the conventional PCGS (right system).
 *
 * Shadow vectors r_flat = P^{-T} r*, p_flat = P^{-T} p*, with r_flat_0 = r_0:
 *   alpha_k = <r_flat_k, r_k> / <p_flat_k, A P^{-1} p_k>
 *   x += alpha P^{-1} p,  r -= alpha A P^{-1} p,  r_flat -= alpha P^{-T} A^T p_flat
 * Stops on ||r_{k+1}|| / ||b|| <= tol.
 */
template <Preconditioner P>
SolveResult pbicg_right(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                        const P& prec, const SolverConfig& cfg) {
  detail::check_problem(A, b, x0, cfg);
  detail::require_same_size("preconditioner", A.size(), prec.size());
  const std::size_t n = A.size();
  const double bnorm = detail::normaliser(norm2(b));
  const double btol = cfg.breakdown_tol;
  detail::TraceRecorder rec(A, b, Method::PbicgRight, cfg);

  Vector x = to_vector(x0);
  Vector r = subtract(b, matvec(A, x0));
  if (norm2(r) / bnorm <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);
  Vector r_flat = r;
  double rho = dot(r_flat, r);
  if (detail::vanishes(rho, norm2(r_flat), norm2(r), btol)) throw InitialShadowDegenerate(rho);

  Vector p(n, 0.0), p_flat(n, 0.0);
  double beta = 0.0;
  const std::size_t cap = cfg.iteration_cap(n);
  for (std::size_t k = 0; k < cap; ++k) {
    if (k > 0 && detail::vanishes(rho, norm2(r_flat), norm2(r), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"rho", k});
    }
    update_direction(p, r, beta);
    update_direction(p_flat, r_flat, beta);
    const Vector u = prec.solve(p);
    const Vector q = matvec(A, u);
    const double sigma = dot(p_flat, q);
    if (detail::vanishes(sigma, norm2(p_flat), norm2(q), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"sigma", k});
    }
    const double alpha = rho / sigma;
    rec.snapshot(x, r, r_flat, p, p_flat);

    add_scaled(x, alpha, u);
    add_scaled(r, -alpha, q);
    const double relres = norm2(r) / bnorm;
    rec.push(alpha, relres, rec.true_relres(x));
    if (relres <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);

    add_scaled(r_flat, -alpha, prec.solve_transpose(matvec_transpose(A, p_flat)));
    const double rho_next = dot(r_flat, r);
    beta = rho_next / rho;
    rho = rho_next;
    rec.set_beta(beta);
  }
  return rec.finish(std::move(x), SolveStatus::MaxIter);
}

/**
 * Left-PBiCG (corresponds to left-PCGS).
 *
 * Works on r+ = P^{-1} r, with r*_0 = r+_0 = P^{-1}(b - A x_0):
 *   alpha_k = <r*_k, r+_k> / <p*_k, P^{-1} A p+_k>
 *   x += alpha p+,  r+ -= alpha P^{-1} A p+,  r* -= alpha A^T P^{-T} p*
 * Stops on ||r+_{k+1}|| / ||P^{-1} b|| <= tol.
 */
template <Preconditioner P>
SolveResult pbicg_left(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                       const P& prec, const SolverConfig& cfg) {
  detail::check_problem(A, b, x0, cfg);
  detail::require_same_size("preconditioner", A.size(), prec.size());
  const std::size_t n = A.size();
  const double btol = cfg.breakdown_tol;
  detail::TraceRecorder rec(A, b, Method::PbicgLeft, cfg);

  Vector x = to_vector(x0);
  Vector r_plus = prec.solve(subtract(b, matvec(A, x0)));
  const double pb_norm = detail::normaliser(norm2(prec.solve(b)));
  if (norm2(r_plus) / pb_norm <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);
  Vector r_shadow = r_plus;
  double rho = dot(r_shadow, r_plus);
  if (detail::vanishes(rho, norm2(r_shadow), norm2(r_plus), btol)) throw InitialShadowDegenerate(rho);

  Vector p_plus(n, 0.0), p_shadow(n, 0.0);
  double beta = 0.0;
  const std::size_t cap = cfg.iteration_cap(n);
  for (std::size_t k = 0; k < cap; ++k) {
    if (k > 0 && detail::vanishes(rho, norm2(r_shadow), norm2(r_plus), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"rho", k});
    }
    update_direction(p_plus, r_plus, beta);
    update_direction(p_shadow, r_shadow, beta);
    const Vector q = prec.solve(matvec(A, p_plus));
    const double sigma = dot(p_shadow, q);
    if (detail::vanishes(sigma, norm2(p_shadow), norm2(q), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"sigma", k});
    }
    const double alpha = rho / sigma;
    rec.snapshot(x, r_plus, r_shadow, p_plus, p_shadow);

    add_scaled(x, alpha, p_plus);
    add_scaled(r_plus, -alpha, q);
    const double relres = norm2(r_plus) / pb_norm;
    rec.push(alpha, relres, rec.true_relres(x));
    if (relres <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);

    add_scaled(r_shadow, -alpha, matvec_transpose(A, prec.solve_transpose(p_shadow)));
    const double rho_next = dot(r_shadow, r_plus);
    beta = rho_next / rho;
    rho = rho_next;
    rec.set_beta(beta);
  }
  return rec.finish(std::move(x), SolveStatus::MaxIter);
}

/**
 * Standard PBiCG (corresponds to Improved1 PCGS).
 *
 * p+ = P^{-1} r + beta p+, p_flat = P^{-T} r* + beta p_flat:
 *   alpha_k = <r*_k, P^{-1} r_k> / <p_flat_k, A p+_k>
 *   x += alpha p+,  r -= alpha A p+,  r* -= alpha A^T p_flat
 * Stops on ||r_{k+1}|| / ||b|| <= tol. The ISRV selects the direction of the
 * system: Isrv1 left, Isrv2 right, Isrv3 two-sided.
 */
template <Preconditioner P>
SolveResult pbicg_standard(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                           const P& prec, const IsrvSpec& isrv, const SolverConfig& cfg) {
  detail::check_problem(A, b, x0, cfg);
  detail::require_same_size("preconditioner", A.size(), prec.size());
  const std::size_t n = A.size();
  const double bnorm = detail::normaliser(norm2(b));
  const double btol = cfg.breakdown_tol;
  detail::TraceRecorder rec(A, b, Method::PbicgStandard, cfg);

  Vector x = to_vector(x0);
  Vector r = subtract(b, matvec(A, x0));
  if (norm2(r) / bnorm <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);
  Vector r_shadow = make_shadow_residual(isrv, A, prec, r);
  Vector z = prec.solve(r);  // P^{-1} r_k
  double rho = dot(r_shadow, z);
  if (detail::vanishes(rho, norm2(r_shadow), norm2(z), btol)) throw InitialShadowDegenerate(rho);

  Vector p_plus(n, 0.0), p_flat(n, 0.0);
  double beta = 0.0;
  const std::size_t cap = cfg.iteration_cap(n);
  for (std::size_t k = 0; k < cap; ++k) {
    if (k > 0 && detail::vanishes(rho, norm2(r_shadow), norm2(z), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"rho", k});
    }
    update_direction(p_plus, z, beta);
    update_direction(p_flat, prec.solve_transpose(r_shadow), beta);
    const Vector q = matvec(A, p_plus);
    const double sigma = dot(p_flat, q);
    if (detail::vanishes(sigma, norm2(p_flat), norm2(q), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"sigma", k});
    }
    const double alpha = rho / sigma;
    rec.snapshot(x, r, r_shadow, p_plus, p_flat);

    add_scaled(x, alpha, p_plus);
    add_scaled(r, -alpha, q);
    const double relres = norm2(r) / bnorm;
    rec.push(alpha, relres, rec.true_relres(x));
    if (relres <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);

    add_scaled(r_shadow, -alpha, matvec_transpose(A, p_flat));
    z = prec.solve(r);
    const double rho_next = dot(r_shadow, z);
    beta = rho_next / rho;
    rho = rho_next;
    rec.set_beta(beta);
  }
  return rec.finish(std::move(x), SolveStatus::MaxIter);
}

/**
 * PBiCG corresponding to Improved2 PCGS, in its economical form: only
 * p+ = P^{-1} p is kept, so the iterated part applies P^{-1} to r_k and
 * P^{-T} to p*_k. r*_0 = P^{-1} r_0.
 *   alpha_k = <r*_k, P^{-1} r_k> / <P^{-T} p*_k, A p+_k>
 *   x += alpha p+,  r -= alpha A p+,  r* -= alpha A^T P^{-T} p*
 * Stops on ||r_{k+1}|| / ||b|| <= tol.
 */
template <Preconditioner P>
SolveResult pbicg_improved2(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                            const P& prec, const SolverConfig& cfg) {
  detail::check_problem(A, b, x0, cfg);
  detail::require_same_size("preconditioner", A.size(), prec.size());
  const std::size_t n = A.size();
  const double bnorm = detail::normaliser(norm2(b));
  const double btol = cfg.breakdown_tol;
  detail::TraceRecorder rec(A, b, Method::PbicgImproved2, cfg);

  Vector x = to_vector(x0);
  Vector r = subtract(b, matvec(A, x0));
  if (norm2(r) / bnorm <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);
  Vector z = prec.solve(r);
  Vector r_shadow = z;
  double rho = dot(r_shadow, z);
  if (detail::vanishes(rho, norm2(r_shadow), norm2(z), btol)) throw InitialShadowDegenerate(rho);

  Vector p_plus(n, 0.0), p_shadow(n, 0.0);
  double beta = 0.0;
  const std::size_t cap = cfg.iteration_cap(n);
  for (std::size_t k = 0; k < cap; ++k) {
    if (k > 0 && detail::vanishes(rho, norm2(r_shadow), norm2(z), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"rho", k});
    }
    update_direction(p_plus, z, beta);
    update_direction(p_shadow, r_shadow, beta);
    const Vector s = prec.solve_transpose(p_shadow);
    const Vector q = matvec(A, p_plus);
    const double sigma = dot(s, q);
    if (detail::vanishes(sigma, norm2(s), norm2(q), btol)) {
      return rec.finish(std::move(x), SolveStatus::Breakdown, BreakdownInfo{"sigma", k});
    }
    const double alpha = rho / sigma;
    rec.snapshot(x, r, r_shadow, p_plus, p_shadow);

    add_scaled(x, alpha, p_plus);
    add_scaled(r, -alpha, q);
    const double relres = norm2(r) / bnorm;
    rec.push(alpha, relres, rec.true_relres(x));
    if (relres <= cfg.tol) return rec.finish(std::move(x), SolveStatus::Converged);

    add_scaled(r_shadow, -alpha, matvec_transpose(A, s));
    z = prec.solve(r);
    const double rho_next = dot(r_shadow, z);
    beta = rho_next / rho;
    rho = rho_next;
    rec.set_beta(beta);
  }
  return rec.finish(std::move(x), SolveStatus::MaxIter);
}

} // namespace pbicg
