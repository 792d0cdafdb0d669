#pragma once

#include <span>

#include "pbicg/krylov/types.hpp"
#include "pbicg/matcore/csr_matrix.hpp"
#include "pbicg/precond/preconditioner.hpp"

namespace pbicg {

/**
 * Builds r*_0 from r_0.
 *
 *   R0     r*_0 = r_0
 *   Isrv1  r*_0 = P^{-1} r_0          (left system under the standard PBiCG)
 *   Isrv2  r*_0 = P^T r_0             (right system)
 *   Isrv3  r*_0 = P_R^T P_L^{-1} r_0  (two-sided system)
 *   AtR0   r*_0 = A^T r_0             (BiCG becomes BiCR)
 *   Custom r*_0 = U r_0               (no direction is implied)
 */
template <Preconditioner P>
Vector make_shadow_residual(const IsrvSpec& isrv, const CsrMatrix& A, const P& prec,
                            std::span<const double> r0) {
  switch (isrv.kind) {
    case IsrvKind::R0: return to_vector(r0);
    case IsrvKind::Isrv1: return prec.solve(r0);
    case IsrvKind::Isrv2: return prec.multiply_transpose(r0);
    case IsrvKind::Isrv3:
      return prec.apply(SplitOp::RightTransposeMultiply, prec.apply(SplitOp::LeftInverse, r0));
    case IsrvKind::AtR0: return matvec_transpose(A, r0);
    case IsrvKind::Custom:
      if (!isrv.custom) throw std::invalid_argument("custom ISRV requires a matrix");
      detail::require_same_size("custom ISRV", r0.size(), isrv.custom->size());
      return matvec(*isrv.custom, r0);
  }
  throw std::invalid_argument("unknown ISRV kind");
}

} // namespace pbicg
