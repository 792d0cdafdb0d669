#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "pbicg/matcore/csr_matrix.hpp"

namespace pbicg {

/// Platform-stable uniform draws (the std distributions are not).
class SeededUniform {
public:
  explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
  std::mt19937_64 engine_;
};

/**
 * Five-point convection-diffusion operator on an m x m grid (n = m*m),
 * central differences, unit mesh scaling: diagonal 4, neighbours
 * -1 -/+ v/2 along the flow component. The flow has magnitude `convection`;
 * seed 0 points it along +x, any other seed picks a deterministic direction.
 * Symmetric exactly when convection == 0.
 */
inline CsrMatrix generate_stencil(std::size_t m, double convection, std::uint64_t seed = 0) {
  if (m < 2) throw std::invalid_argument("generate_stencil: grid size must be >= 2");
  double vx = convection;
  double vy = 0.0;
  if (seed != 0) {
    SeededUniform rng(seed);
    const double theta = 2.0 * std::numbers::pi * rng.next();
    vx = convection * std::cos(theta);
    vy = convection * std::sin(theta);
  }
  const std::size_t n = m * m;
  std::vector<Triplet> t;
  t.reserve(5 * n);
  for (std::size_t iy = 0; iy < m; ++iy) {
    for (std::size_t ix = 0; ix < m; ++ix) {
      const std::size_t row = iy * m + ix;
      if (iy > 0) t.push_back({row, row - m, -1.0 - 0.5 * vy});
      if (ix > 0) t.push_back({row, row - 1, -1.0 - 0.5 * vx});
      t.push_back({row, row, 4.0});
      if (ix + 1 < m) t.push_back({row, row + 1, -1.0 + 0.5 * vx});
      if (iy + 1 < m) t.push_back({row, row + m, -1.0 + 0.5 * vy});
    }
  }
  return CsrMatrix::from_triplets(n, std::move(t));
}

/// Random sparse nonsymmetric matrix, strictly diagonally dominant
/// (diagonal = 1 + sum of |off-diagonals| in the row). density in [0, 1]
/// is the off-diagonal fill probability.
inline CsrMatrix generate_random(std::size_t n, double density, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_random: n must be positive");
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("generate_random: density must lie in [0, 1]");
  }
  SeededUniform rng(seed);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    double offsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (rng.next() < density) {
        const double v = rng.next(-1.0, 1.0);
        offsum += std::abs(v);
        t.push_back({i, j, v});
      }
    }
    t.push_back({i, i, 1.0 + offsum});
  }
  return CsrMatrix::from_triplets(n, std::move(t));
}

} // namespace pbicg
