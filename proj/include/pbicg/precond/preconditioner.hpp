#pragma once

#include <concepts>
#include <cstddef>
#include <span>

#include "pbicg/matcore/vector.hpp"
#include "pbicg/precond/ilu0.hpp"

namespace pbicg {

enum class PrecSide { None, Left, Right, TwoSided };

/**
 * A preconditioner P = P_L P_R as the solvers see it.
 *
 * solve / solve_transpose apply P^{-1} / P^{-T}; multiply /
 * multiply_transpose apply P / P^T; apply(SplitOp, v) exposes the individual
 * factors of the split.
 */
template <class P>
concept Preconditioner = requires(const P& p, std::span<const double> v, SplitOp op) {
  { p.size() } -> std::convertible_to<std::size_t>;
  { p.solve(v) } -> std::same_as<Vector>;
  { p.solve_transpose(v) } -> std::same_as<Vector>;
  { p.multiply(v) } -> std::same_as<Vector>;
  { p.multiply_transpose(v) } -> std::same_as<Vector>;
  { p.apply(op, v) } -> std::same_as<Vector>;
};

/// P = I; every operation is a copy.
class IdentityPreconditioner {
public:
  explicit IdentityPreconditioner(std::size_t n) : n_(n) {}

  std::size_t size() const noexcept { return n_; }
  Vector solve(std::span<const double> v) const { return checked_copy(v); }
  Vector solve_transpose(std::span<const double> v) const { return checked_copy(v); }
  Vector multiply(std::span<const double> v) const { return checked_copy(v); }
  Vector multiply_transpose(std::span<const double> v) const { return checked_copy(v); }
  Vector apply(SplitOp, std::span<const double> v) const { return checked_copy(v); }

private:
  Vector checked_copy(std::span<const double> v) const {
    detail::require_same_size("IdentityPreconditioner", n_, v.size());
    return to_vector(v);
  }

  std::size_t n_;
};

/// ILU(0) with the split P_L = L, P_R = U.
class Ilu0Preconditioner {
public:
  explicit Ilu0Preconditioner(const CsrMatrix& A) : factors_(ilu0_factorize(A)) {}
  explicit Ilu0Preconditioner(Ilu0Factors factors) : factors_(std::move(factors)) {}

  std::size_t size() const noexcept { return factors_.size(); }
  const Ilu0Factors& factors() const noexcept { return factors_; }

  Vector solve(std::span<const double> v) const { return apply_minv(factors_, v); }
  Vector solve_transpose(std::span<const double> v) const { return apply_minv_transpose(factors_, v); }
  Vector multiply(std::span<const double> v) const {
    return apply_split(factors_, SplitOp::LeftMultiply, apply_split(factors_, SplitOp::RightMultiply, v));
  }
  Vector multiply_transpose(std::span<const double> v) const {
    return apply_split(factors_, SplitOp::RightTransposeMultiply,
                       apply_split(factors_, SplitOp::LeftTransposeMultiply, v));
  }
  Vector apply(SplitOp op, std::span<const double> v) const { return apply_split(factors_, op, v); }

private:
  Ilu0Factors factors_;
};

/// Call counts of a CountingPreconditioner.
struct PrecCallCounts {
  std::size_t solve = 0;
  std::size_t solve_transpose = 0;
  std::size_t multiply = 0;
  std::size_t multiply_transpose = 0;
  std::size_t split = 0;

  bool operator==(const PrecCallCounts&) const = default;
};

/// Instrumentation wrapper. Not thread-safe: counters are mutated from const
/// calls.
template <Preconditioner P>
class CountingPreconditioner {
public:
  explicit CountingPreconditioner(const P& inner) : inner_(&inner) {}

  std::size_t size() const noexcept { return inner_->size(); }
  Vector solve(std::span<const double> v) const { ++counts_.solve; return inner_->solve(v); }
  Vector solve_transpose(std::span<const double> v) const {
    ++counts_.solve_transpose;
    return inner_->solve_transpose(v);
  }
  Vector multiply(std::span<const double> v) const { ++counts_.multiply; return inner_->multiply(v); }
  Vector multiply_transpose(std::span<const double> v) const {
    ++counts_.multiply_transpose;
    return inner_->multiply_transpose(v);
  }
  Vector apply(SplitOp op, std::span<const double> v) const { ++counts_.split; return inner_->apply(op, v); }

  const PrecCallCounts& counts() const noexcept { return counts_; }
  void reset() const noexcept { counts_ = {}; }

private:
  const P* inner_;
  mutable PrecCallCounts counts_;
};

// --- split views used by the explicitly converted BiCG -----------------------

/// Left and right factors of a conversion A~ = P_L^{-1} A P_R^{-1}.
template <class S>
concept SplitPreconditioner = requires(const S& s, std::span<const double> v) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.left_solve(v) } -> std::same_as<Vector>;
  { s.left_solve_transpose(v) } -> std::same_as<Vector>;
  { s.left_multiply(v) } -> std::same_as<Vector>;
  { s.right_solve(v) } -> std::same_as<Vector>;
  { s.right_solve_transpose(v) } -> std::same_as<Vector>;
  { s.right_multiply(v) } -> std::same_as<Vector>;
};

/// P_L = L, P_R = U (the factored split).
template <Preconditioner P>
class FactorSplit {
public:
  explicit FactorSplit(const P& p) : p_(&p) {}

  std::size_t size() const noexcept { return p_->size(); }
  Vector left_solve(std::span<const double> v) const { return p_->apply(SplitOp::LeftInverse, v); }
  Vector left_solve_transpose(std::span<const double> v) const {
    return p_->apply(SplitOp::LeftInverseTranspose, v);
  }
  Vector left_multiply(std::span<const double> v) const { return p_->apply(SplitOp::LeftMultiply, v); }
  Vector right_solve(std::span<const double> v) const { return p_->apply(SplitOp::RightInverse, v); }
  Vector right_solve_transpose(std::span<const double> v) const {
    return p_->apply(SplitOp::RightInverseTranspose, v);
  }
  Vector right_multiply(std::span<const double> v) const { return p_->apply(SplitOp::RightMultiply, v); }

private:
  const P* p_;
};

/// P_L = P, P_R = I.
template <Preconditioner P>
class WholeOnLeft {
public:
  explicit WholeOnLeft(const P& p) : p_(&p) {}

  std::size_t size() const noexcept { return p_->size(); }
  Vector left_solve(std::span<const double> v) const { return p_->solve(v); }
  Vector left_solve_transpose(std::span<const double> v) const { return p_->solve_transpose(v); }
  Vector left_multiply(std::span<const double> v) const { return p_->multiply(v); }
  Vector right_solve(std::span<const double> v) const { return to_vector(v); }
  Vector right_solve_transpose(std::span<const double> v) const { return to_vector(v); }
  Vector right_multiply(std::span<const double> v) const { return to_vector(v); }

private:
  const P* p_;
};

/// P_L = I, P_R = P.
template <Preconditioner P>
class WholeOnRight {
public:
  explicit WholeOnRight(const P& p) : p_(&p) {}

  std::size_t size() const noexcept { return p_->size(); }
  Vector left_solve(std::span<const double> v) const { return to_vector(v); }
  Vector left_solve_transpose(std::span<const double> v) const { return to_vector(v); }
  Vector left_multiply(std::span<const double> v) const { return to_vector(v); }
  Vector right_solve(std::span<const double> v) const { return p_->solve(v); }
  Vector right_solve_transpose(std::span<const double> v) const { return p_->solve_transpose(v); }
  Vector right_multiply(std::span<const double> v) const { return p_->multiply(v); }

private:
  const P* p_;
};

} // namespace pbicg
