#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <utility>

#include "pbicg/errors.hpp"
#include "pbicg/krylov/types.hpp"

namespace pbicg::detail {

inline void check_problem(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                          const SolverConfig& cfg) {
  cfg.validate();
  require_same_size("rhs", A.size(), b.size());
  require_same_size("initial guess", A.size(), x0.size());
}

/// Norm used as a denominator; a zero norm normalises by 1 instead.
inline double normaliser(double norm) { return norm > 0.0 ? norm : 1.0; }

/// |value| <= tol * |a| * |b|, or value is not finite.
inline bool vanishes(double value, double norm_a, double norm_b, double tol) {
  return !std::isfinite(value) || std::abs(value) <= tol * norm_a * norm_b;
}

/// Collects the IterationTrace and assembles the SolveResult.
class TraceRecorder {
public:
  TraceRecorder(const CsrMatrix& A, std::span<const double> b, Method method, const SolverConfig& cfg)
      : A_(&A), b_(b), bnorm_(normaliser(norm2(b))), tol_(cfg.tol) {
    trace_.method = method;
    if (cfg.record_vectors) trace_.vectors.emplace();
  }

  double tol() const noexcept { return tol_; }

  /// ||b - A x|| / ||b||, recomputed from scratch.
  double true_relres(std::span<const double> x) const {
    return norm2(subtract(b_, matvec(*A_, x))) / bnorm_;
  }

  void snapshot(std::span<const double> x, std::span<const double> r, std::span<const double> rs,
                std::span<const double> p, std::span<const double> ps) {
    if (!trace_.vectors) return;
    auto& h = *trace_.vectors;
    h.x.push_back(to_vector(x));
    h.r.push_back(to_vector(r));
    h.r_shadow.push_back(to_vector(rs));
    h.p.push_back(to_vector(p));
    h.p_shadow.push_back(to_vector(ps));
  }

  void push(double alpha, double relres_alg, double relres_true) {
    trace_.alphas.push_back(alpha);
    trace_.betas.push_back(std::numeric_limits<double>::quiet_NaN());
    trace_.relres_alg.push_back(relres_alg);
    trace_.relres_true.push_back(relres_true);
  }

  void set_beta(double beta) { trace_.betas.back() = beta; }

  SolveResult finish(Vector x, SolveStatus status, std::optional<BreakdownInfo> info = std::nullopt) {
    SolveResult res;
    res.x = std::move(x);
    res.status = status;
    res.breakdown = std::move(info);
    res.iterations = trace_.alphas.size();
    res.trace = std::move(trace_);
    return res;
  }

private:
  const CsrMatrix* A_;
  std::span<const double> b_;
  double bnorm_;
  double tol_;
  IterationTrace trace_;
};

} // namespace pbicg::detail
