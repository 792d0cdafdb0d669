#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "pbicg/krylov/types.hpp"

namespace pbicg::verify {

/// |a - b| / max(|a|, |b|, 1e-300). Two NaNs compare equal (both runs
/// skipped that beta); a single NaN is an infinite deviation.
inline double relative_deviation(double a, double b) {
  const bool na = std::isnan(a), nb = std::isnan(b);
  if (na && nb) return 0.0;
  if (na || nb) return std::numeric_limits<double>::infinity();
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Max relative_deviation over the first `count` entries.
inline double max_relative_deviation(std::span<const double> a, std::span<const double> b, std::size_t count) {
  if (a.size() < count || b.size() < count) {
    throw std::invalid_argument("max_relative_deviation: series shorter than " + std::to_string(count));
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) worst = std::max(worst, relative_deviation(a[k], b[k]));
  return worst;
}

struct TraceComparison {
  double max_rel_alpha = 0.0;
  double max_rel_beta = 0.0;
  double max_rel_relres = 0.0;
};

/// Compares alpha, beta and relres_alg over k < k_max. Both traces must
/// reach k_max.
inline TraceComparison compare_traces(const IterationTrace& t1, const IterationTrace& t2, std::size_t k_max) {
  if (t1.size() < k_max || t2.size() < k_max) {
    throw std::invalid_argument("compare_traces: trace shorter than k_max (" + std::to_string(t1.size()) + ", " +
                                std::to_string(t2.size()) + " < " + std::to_string(k_max) + ")");
  }
  return {max_relative_deviation(t1.alphas, t2.alphas, k_max), max_relative_deviation(t1.betas, t2.betas, k_max),
          max_relative_deviation(t1.relres_alg, t2.relres_alg, k_max)};
}

} // namespace pbicg::verify
