#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace pbicg;
using namespace testing_support;

namespace {

using Poly = std::vector<double>;

Poly add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

/// Residual polynomials from the three-term form obtained by eliminating P_k:
///   R_{k+1} = (1 + a_k b_{k-1}/a_{k-1} - a_k z) R_k - (a_k b_{k-1}/a_{k-1}) R_{k-1}.
std::vector<Poly> three_term_residuals(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<Poly> R{{1.0}};
  R.push_back(mul({1.0, -a[0]}, R[0]));
  for (std::size_t k = 1; k < a.size(); ++k) {
    const double g = a[k] * b[k - 1] / a[k - 1];
    R.push_back(add(mul({1.0 + g, -a[k]}, R[k]), mul({-g}, R[k - 1])));
  }
  return R;
}

double max_coeff_gap(const Poly& a, const Poly& b) {
  double gap = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return gap / scale;
}

SolverConfig with_vectors(double tol = 1e-10) {
  SolverConfig cfg;
  cfg.tol = tol;
  cfg.record_vectors = true;
  return cfg;
}

} // namespace

TEST(PolynomialTrace, BaseCaseAndOneStep) {
  const auto p0 = verify::polynomial_trace(std::vector<double>{}, std::vector<double>{});
  ASSERT_EQ(p0.R.size(), 1u);
  EXPECT_EQ(p0.R[0], Poly{1.0});
  EXPECT_EQ(p0.P[0], Poly{1.0});
  const auto p1 = verify::polynomial_trace(std::vector<double>{0.7}, std::vector<double>{0.2});
  EXPECT_EQ(p1.R[1], (Poly{1.0, -0.7}));
  EXPECT_EQ(p1.P[1], (Poly{1.2, -0.7}));
  EXPECT_THROW(verify::polynomial_trace(std::vector<double>{1.0}, std::vector<double>{}), std::invalid_argument);
}

TEST(PolynomialTrace, MatchesThreeTermExpansion) {
  SeededUniform rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + trial % 6;
    std::vector<double> a(k), b(k);
    for (auto& v : a) v = rng.next(0.2, 2.0);
    for (auto& v : b) v = rng.next(0.05, 1.0);
    const auto pt = verify::polynomial_trace(a, b);
    const auto ref = three_term_residuals(a, b);
    for (std::size_t j = 0; j <= k; ++j) {
      ASSERT_EQ(pt.R[j].size(), j + 1);
      ASSERT_EQ(pt.P[j].size(), j + 1);
      EXPECT_LE(max_coeff_gap(pt.R[j], ref[j]), 1e-13) << "trial " << trial << " degree " << j;
    }
  }
}

TEST(PolynomialTrace, AlgorithmIndependent) {
  const CsrMatrix A = generate_stencil(6, 0.9, 2);
  const Vector b = matvec(A, ones(A.size()));
  const IdentityPreconditioner I(A.size());
  SolverConfig cfg;
  cfg.max_iter = 8;
  const auto t1 = bicg(A, b, zeros(A.size()), IsrvSpec::r0(), cfg).trace;
  const auto t2 = pbicg_improved2(A, b, zeros(A.size()), I, cfg).trace;
  const auto p1 = verify::polynomial_trace(t1.alphas, t1.betas);
  const auto p2 = verify::polynomial_trace(t2.alphas, t2.betas);
  for (std::size_t k = 0; k < p1.R.size(); ++k) EXPECT_LE(max_coeff_gap(p2.R[k], p1.R[k]), 1e-12);
}

TEST(PolynomialEvaluation, RecurrenceMatchesHornerAtLowDegree) {
  const CsrMatrix A = generate_random(12, 0.4, 9);
  const auto op = [&A](std::span<const double> v) { return matvec(A, v); };
  const std::vector<double> a{0.3, 0.25, 0.4, 0.2}, b{0.5, 0.1, 0.3, 0.2};
  const Vector v = matvec(A, ones(12));
  const auto rec = verify::evaluate_residual_polynomials(a, b, op, v);
  const auto pt = verify::polynomial_trace(a, b);
  for (std::size_t k = 0; k <= 4; ++k) {
    EXPECT_LE(rel_diff(rec[k], verify::evaluate_polynomial(pt.R[k], op, v)), 1e-12) << k;
  }
}

TEST(PolynomialConsistency, PlainBicgOnRandomMatrix) {
  const CsrMatrix A = generate_random(20, 0.3, 4);
  const auto res = bicg(A, matvec(A, ones(20)), zeros(20), IsrvSpec::r0(), with_vectors());
  EXPECT_LE(verify::check_polynomial_consistency(A, IdentityPreconditioner(20), res.trace, 10), 1e-10);
  EXPECT_EQ(verify::check_polynomial_consistency(A, IdentityPreconditioner(20), res.trace, 0), 0.0);
}

TEST(PolynomialConsistency, StandardPbicgStructure) {
  const CsrMatrix A = generate_stencil(10, 0.5, 3);
  const Ilu0Preconditioner P(A);
  const Vector b = matvec(A, ones(A.size()));
  for (const auto& isrv : {IsrvSpec::isrv1(), IsrvSpec::isrv2(), IsrvSpec::isrv3()}) {
    const auto res = pbicg_standard(A, b, zeros(A.size()), P, isrv, with_vectors());
    EXPECT_LE(verify::check_polynomial_consistency(A, P, res.trace, 10), 1e-8) << to_string(isrv.kind);
  }
}

TEST(PolynomialConsistency, DetectsCorruptedCoefficients) {
  const CsrMatrix A = generate_stencil(8, 0.5, 1);
  const Ilu0Preconditioner P(A);
  auto res = pbicg_left(A, matvec(A, ones(A.size())), zeros(A.size()), P, with_vectors());
  res.trace.alphas[2] *= 1.0 + 1e-6;
  EXPECT_GT(verify::check_polynomial_consistency(A, P, res.trace, 10), 1e-8);
}

TEST(PolynomialConsistency, WrongStructureIsDetected) {
  // pbicg-left residuals are P^{-1} r; reading them as right-system residuals must fail.
  const CsrMatrix A = generate_stencil(8, 0.5, 1);
  const Ilu0Preconditioner P(A);
  auto res = pbicg_left(A, matvec(A, ones(A.size())), zeros(A.size()), P, with_vectors());
  res.trace.method = Method::PbicgRight;
  EXPECT_GT(verify::check_polynomial_consistency(A, P, res.trace, 10), 1e-4);
}

TEST(PolynomialConsistency, NeedsVectors) {
  const CsrMatrix A = generate_random(6, 0.5, 1);
  const auto res = bicg(A, ones(6), zeros(6), IsrvSpec::r0(), SolverConfig{});
  EXPECT_THROW(verify::check_polynomial_consistency(A, IdentityPreconditioner(6), res.trace), std::invalid_argument);
  EXPECT_THROW(verify::check_orthogonality(A, IdentityPreconditioner(6), res.trace, 4), std::invalid_argument);
}

TEST(Orthogonality, FirstStepIsForcedByAlpha) {
  const CsrMatrix A = generate_random(15, 0.3, 6);
  const auto res = bicg(A, matvec(A, ones(15)), zeros(15), IsrvSpec::r0(), with_vectors());
  const auto rep = verify::check_biorthogonality(A, IdentityPreconditioner(15), res.trace, 1);
  EXPECT_EQ(rep.k_range, 1u);
  EXPECT_LE(rep.max_offdiag_biortho, 1e-14);
}

TEST(Orthogonality, PlainBicgRandom) {
  const CsrMatrix A = generate_random(15, 0.3, 6);
  const auto res = bicg(A, matvec(A, ones(15)), zeros(15), IsrvSpec::r0(), with_vectors(1e-14));
  const auto rep = verify::check_orthogonality(A, IdentityPreconditioner(15), res.trace, 6);
  EXPECT_LE(rep.max_offdiag_biortho, 1e-8);
  EXPECT_LE(rep.max_offdiag_biconj, 1e-8);
}

TEST(Orthogonality, EveryPreconditionedVariant) {
  const CsrMatrix A = generate_stencil(8, 0.7, 5);
  const Ilu0Preconditioner P(A);
  const Vector b = matvec(A, ones(A.size()));
  const Vector x0 = zeros(A.size());
  const auto cfg = with_vectors();
  for (const auto& res : {pbicg_right(A, b, x0, P, cfg), pbicg_left(A, b, x0, P, cfg),
                          pbicg_standard(A, b, x0, P, IsrvSpec::isrv1(), cfg), pbicg_improved2(A, b, x0, P, cfg),
                          bicg_converted(A, b, x0, P, PrecSide::TwoSided, cfg)}) {
    const auto rep = verify::check_orthogonality(A, P, res.trace, 8);
    EXPECT_LE(rep.max_offdiag_biortho, 1e-8) << to_string(res.trace.method);
    EXPECT_LE(rep.max_offdiag_biconj, 1e-8) << to_string(res.trace.method);
  }
}

TEST(Orthogonality, DetectsBrokenHistory) {
  const CsrMatrix A = generate_random(15, 0.3, 6);
  auto res = bicg(A, matvec(A, ones(15)), zeros(15), IsrvSpec::r0(), with_vectors());
  auto& h = *res.trace.vectors;
  h.r_shadow[3] = h.r[1];
  h.p_shadow[3] = h.p[1];
  const auto rep = verify::check_orthogonality(A, IdentityPreconditioner(15), res.trace, 6);
  EXPECT_GT(rep.max_offdiag_biortho, 1e-3);
  EXPECT_GT(rep.max_offdiag_biconj, 1e-3);
}

TEST(Compare, RelativeDeviation) {
  EXPECT_EQ(verify::relative_deviation(2.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(verify::relative_deviation(1.0, 2.0), 0.5);
  EXPECT_EQ(verify::relative_deviation(NAN, NAN), 0.0);
  EXPECT_TRUE(std::isinf(verify::relative_deviation(NAN, 1.0)));
  EXPECT_EQ(verify::relative_deviation(0.0, 0.0), 0.0);
}

TEST(Compare, Traces) {
  const CsrMatrix A = generate_random(20, 0.2, 3);
  const auto t = bicg(A, matvec(A, ones(20)), zeros(20), IsrvSpec::r0(), SolverConfig{}).trace;
  const auto same = verify::compare_traces(t, t, t.size());
  EXPECT_EQ(same.max_rel_alpha, 0.0);
  EXPECT_EQ(same.max_rel_beta, 0.0);
  EXPECT_EQ(same.max_rel_relres, 0.0);
  auto u = t;
  u.alphas[1] *= 1.0 + 1e-3;
  EXPECT_NEAR(verify::compare_traces(t, u, t.size()).max_rel_alpha, 1e-3, 1e-6);
  EXPECT_THROW(verify::compare_traces(t, u, t.size() + 1), std::invalid_argument);
}

TEST(Dense, SolveWithPivoting) {
  const auto x = verify::dense_solve({0, 1, 1, 0}, Vector{2, 3});
  EXPECT_EQ(x, (Vector{3, 2}));
  EXPECT_THROW(verify::dense_solve({1, 1, 1, 1}, Vector{1, 1}), std::invalid_argument);
  const CsrMatrix A = generate_random(10, 0.5, 1);
  const Vector b = matvec(A, ones(10));
  EXPECT_LE(rel_diff(verify::dense_solve(verify::to_dense(A), b), ones(10)), 1e-13);
}
