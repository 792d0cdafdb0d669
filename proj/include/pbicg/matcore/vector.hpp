#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pbicg/errors.hpp"

namespace pbicg {

using Vector = std::vector<double>;

namespace detail {

inline void require_same_size(const char* where, std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw DimensionMismatch(where, expected, actual);
  }
}

} // namespace detail

/// Euclidean inner product, summed left to right.
inline double dot(std::span<const double> u, std::span<const double> v) {
  detail::require_same_size("dot", u.size(), v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += u[i] * v[i];
  }
  return s;
}

inline double norm2(std::span<const double> u) { return std::sqrt(dot(u, u)); }

/// Returns a*u + v.
inline Vector axpy(double a, std::span<const double> u, std::span<const double> v) {
  detail::require_same_size("axpy", u.size(), v.size());
  Vector y(v.begin(), v.end());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] += a * u[i];
  }
  return y;
}

/// y += a*x
inline void add_scaled(std::span<double> y, double a, std::span<const double> x) {
  detail::require_same_size("add_scaled", y.size(), x.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] += a * x[i];
  }
}

/// p = r + beta*p, the direction update shared by every BiCG-type recurrence.
inline void update_direction(std::span<double> p, std::span<const double> r, double beta) {
  detail::require_same_size("update_direction", p.size(), r.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = r[i] + beta * p[i];
  }
}

/// Returns u - v.
inline Vector subtract(std::span<const double> u, std::span<const double> v) {
  detail::require_same_size("subtract", u.size(), v.size());
  Vector y(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    y[i] = u[i] - v[i];
  }
  return y;
}

inline Vector to_vector(std::span<const double> v) { return Vector(v.begin(), v.end()); }

} // namespace pbicg
