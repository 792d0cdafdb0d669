#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbicg/matcore/csr_matrix.hpp"
#include "pbicg/precond/preconditioner.hpp"

namespace pbicg {

struct SolverConfig {
  /// Relative residual threshold; the normalisation depends on the method.
  double tol = 1e-8;
  /// Iteration cap; unset means 2n.
  std::optional<std::size_t> max_iter;
  /// Keep the per-iteration vectors needed by the verification checks.
  bool record_vectors = false;
  /// Relative breakdown threshold for rho_k and sigma_k.
  double breakdown_tol = 1e-14;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter && *max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (!(breakdown_tol >= 0.0)) throw std::invalid_argument("SolverConfig: breakdown_tol must be >= 0");
  }

  std::size_t iteration_cap(std::size_t n) const { return max_iter.value_or(2 * n); }
};

enum class IsrvKind { R0, Isrv1, Isrv2, Isrv3, AtR0, Custom };

/// How the initial shadow residual r*_0 is built from r_0.
struct IsrvSpec {
  IsrvKind kind = IsrvKind::R0;
  std::optional<CsrMatrix> custom;  // U of r*_0 = U r_0, only for Custom

  static IsrvSpec r0() { return {IsrvKind::R0, std::nullopt}; }
  static IsrvSpec isrv1() { return {IsrvKind::Isrv1, std::nullopt}; }
  static IsrvSpec isrv2() { return {IsrvKind::Isrv2, std::nullopt}; }
  static IsrvSpec isrv3() { return {IsrvKind::Isrv3, std::nullopt}; }
  static IsrvSpec at_r0() { return {IsrvKind::AtR0, std::nullopt}; }
  static IsrvSpec with_matrix(CsrMatrix U) { return {IsrvKind::Custom, std::move(U)}; }
};

inline std::string_view to_string(IsrvKind k) {
  switch (k) {
    case IsrvKind::R0: return "r0";
    case IsrvKind::Isrv1: return "isrv1";
    case IsrvKind::Isrv2: return "isrv2";
    case IsrvKind::Isrv3: return "isrv3";
    case IsrvKind::AtR0: return "atr0";
    case IsrvKind::Custom: return "custom";
  }
  return "?";
}

/// Which recurrence produced a trace; fixes how its recorded vectors relate
/// to the preconditioned system.
enum class Method {
  Bicg,
  ConvertedLeft,
  ConvertedRight,
  ConvertedTwoSided,
  PbicgRight,
  PbicgLeft,
  PbicgStandard,
  PbicgImproved2,
  Bicr,
};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Bicg: return "bicg";
    case Method::ConvertedLeft: return "bicg-conv-left";
    case Method::ConvertedRight: return "bicg-conv-right";
    case Method::ConvertedTwoSided: return "bicg-conv-two";
    case Method::PbicgRight: return "pbicg-right";
    case Method::PbicgLeft: return "pbicg-left";
    case Method::PbicgStandard: return "pbicg-std";
    case Method::PbicgImproved2: return "pbicg-impr2";
    case Method::Bicr: return "bicr";
  }
  return "?";
}

/**
 * Per-iteration vectors in the algorithm's own variables, index k holding
 * the state at which alpha_k is formed:
 *
 *  method            x        r         r_shadow   p         p_shadow
 *  Bicg              x        r         r*         p         p*
 *  Converted*        x~       r~        r~*        p~        p~*
 *  PbicgRight        x        r         r_flat     p         p_flat
 *  PbicgLeft         x        r+        r*         p+        p*
 *  PbicgStandard     x        r         r*         p+        p_flat
 *  PbicgImproved2    x        r         r*         p+        p*
 *  Bicr              x        r         r*         p         p*
 */
struct VectorHistory {
  std::vector<Vector> x, r, r_shadow, p, p_shadow;

  std::size_t size() const noexcept { return r.size(); }
};

struct IterationTrace {
  Method method = Method::Bicg;
  std::vector<double> alphas;
  /// beta_k; NaN for the final iteration when the solve converged there.
  std::vector<double> betas;
  /// The method's own stopping quantity after iteration k.
  std::vector<double> relres_alg;
  /// ||b - A x_{k+1}|| / ||b|| on the original system.
  std::vector<double> relres_true;
  std::optional<VectorHistory> vectors;

  std::size_t size() const noexcept { return alphas.size(); }
};

enum class SolveStatus { Converged, MaxIter, Breakdown };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max-iter";
    case SolveStatus::Breakdown: return "breakdown";
  }
  return "?";
}

struct BreakdownInfo {
  std::string stage;  // "rho" or "sigma"
  std::size_t iteration = 0;
};

struct SolveResult {
  Vector x;
  SolveStatus status = SolveStatus::MaxIter;
  std::optional<BreakdownInfo> breakdown;
  std::size_t iterations = 0;
  IterationTrace trace;
};

} // namespace pbicg
