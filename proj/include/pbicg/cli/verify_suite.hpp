#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "pbicg/cli/commands.hpp"

namespace pbicg::cli {

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Stencil grid sizes m; the paired random matrix has n = m*m.
  std::vector<std::size_t> sizes{6, 10};
  /// Negative control: perturbs one recorded alpha so the polynomial check must fail.
  bool inject_fault = false;
};

/// Limits applied by run_verify.
struct VerifyLimits {
  double polynomial = 1e-8;
  std::size_t polynomial_k = 10;
  double orthogonality = 1e-8;
  std::size_t orthogonality_k = 8;
  double isrv_switching = 1e-6;
  double equivalence = 1e-8;
  std::size_t equivalence_k = 30;
  double bicr = 1e-6;
  std::size_t bicr_k = 10;
  double congruency = 1e-12;
  double ilu_exact = 1e-10;
  std::size_t ilu_vectors = 100;
};

class VerifyReport {
public:
  void check(const std::string& suite, const std::string& subject, double value, double limit) {
    const bool ok = value <= limit;  // NaN fails
    (ok ? passed_ : failed_) += 1;
    text_ += std::string(ok ? "PASS " : "FAIL ") + suite + " " + subject + " value=" + format_short(value) +
             " limit=" + format_short(limit) + "\n";
  }

  void fail(const std::string& suite, const std::string& subject, const std::string& why) {
    ++failed_;
    text_ += "FAIL " + suite + " " + subject + " " + why + "\n";
  }

  std::string finish() const {
    return text_ + "summary passed=" + std::to_string(passed_) + " failed=" + std::to_string(failed_) + "\n";
  }

  bool ok() const noexcept { return failed_ == 0; }

private:
  std::string text_;
  std::size_t passed_ = 0, failed_ = 0;
};

namespace detail {

struct NamedRun {
  Variant variant;
  SolveResult result;
};

inline const SolveResult& find_run(const std::vector<NamedRun>& runs, const std::string& label) {
  for (const auto& r : runs) {
    if (r.variant.label == label) return r.result;
  }
  throw std::logic_error("verify: no run labelled " + label);
}

/// Largest relative deviation over every alpha, beta and relres; infinite
/// when the lengths differ.
inline double trace_deviation(const IterationTrace& a, const IterationTrace& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  return std::max({verify::max_relative_deviation(a.alphas, b.alphas, n),
                   verify::max_relative_deviation(a.betas, b.betas, n),
                   verify::max_relative_deviation(a.relres_alg, b.relres_alg, n)});
}

inline void verify_matrix(VerifyReport& rep, const std::string& name, const CsrMatrix& A, const VerifyLimits& lim,
                          bool corrupt) {
  const std::size_t n = A.size();
  const Vector b = matvec(A, Vector(n, 1.0));
  const Vector x0(n, 0.0);
  const Ilu0Preconditioner P(A);
  const IdentityPreconditioner I(n);
  SolverConfig cfg;
  cfg.record_vectors = true;

  std::vector<NamedRun> runs;
  for (const char* label : {"bicg", "bicg:atr0", "bicr", "bicg-conv-left", "bicg-conv-right", "bicg-conv-two",
                            "pbicg-right", "pbicg-left", "pbicg-std:isrv1", "pbicg-std:isrv2", "pbicg-std:isrv3",
                            "pbicg-impr2"}) {
    const Variant v = parse_variant(label);
    runs.push_back({v, run_variant(v, A, b, x0, P, cfg)});
  }
  if (corrupt) {
    auto& alphas = runs[8].result.trace.alphas;
    if (alphas.size() > 1) alphas[1] *= 1.0 + 1e-3;
  }

  for (const auto& [v, res] : runs) {
    const std::string subject = name + " " + v.label;
    if (res.status != SolveStatus::Converged) {
      rep.fail("convergence", subject, std::string("status=") + std::string(to_string(res.status)));
    }
    const bool plain = v.method == Method::Bicg || v.method == Method::Bicr;
    const auto poly = [&](const auto& prec) {
      return verify::check_polynomial_consistency(A, prec, res.trace, lim.polynomial_k);
    };
    const auto ortho = [&](const auto& prec) {
      return verify::check_orthogonality(A, prec, res.trace, lim.orthogonality_k);
    };
    rep.check("polynomial", subject, plain ? poly(I) : poly(P), lim.polynomial);
    const auto o = plain ? ortho(I) : ortho(P);
    rep.check("biorthogonality", subject, o.max_offdiag_biortho, lim.orthogonality);
    rep.check("biconjugacy", subject, o.max_offdiag_biconj, lim.orthogonality);
  }

  const std::pair<const char*, const char*> switching[] = {
      {"bicg-conv-left", "pbicg-std:isrv1"}, {"bicg-conv-right", "pbicg-std:isrv2"},
      {"bicg-conv-two", "pbicg-std:isrv3"}};
  for (const auto& [conv, standard] : switching) {
    const auto& t1 = find_run(runs, conv).trace;
    const auto& t2 = find_run(runs, standard).trace;
    const std::size_t count = std::min(t1.size(), t2.size());
    const double dev = t1.size() == t2.size() ? verify::max_relative_deviation(t1.relres_alg, t2.relres_alg, count)
                                              : std::numeric_limits<double>::infinity();
    rep.check("isrv-switching", name + " " + conv + "~" + standard, dev, lim.isrv_switching);
  }

  const char* equivalent[] = {"pbicg-left", "pbicg-std:isrv1", "pbicg-impr2"};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const auto& t1 = find_run(runs, equivalent[i]).trace;
      const auto& t2 = find_run(runs, equivalent[j]).trace;
      const std::size_t count = std::min({lim.equivalence_k, t1.size(), t2.size()});
      rep.check("equivalence", name + " " + equivalent[i] + "~" + equivalent[j],
                series_deviation(t1, t2, count, CompareSeries::AlphaBeta), lim.equivalence);
    }
  }

  {
    const auto& t1 = find_run(runs, "bicg:atr0").trace;
    const auto& t2 = find_run(runs, "bicr").trace;
    const std::size_t count = std::min({lim.bicr_k + 1, t1.size(), t2.size()});
    rep.check("bicr", name + " bicg:atr0~bicr", series_deviation(t1, t2, count, CompareSeries::AlphaBeta), lim.bicr);
  }

  {
    cfg.record_vectors = false;
    rep.check("congruency", name + " two-sided(P,I)~bicg-conv-left",
              trace_deviation(bicg_two_sided(A, b, x0, WholeOnLeft(P), cfg, Method::ConvertedLeft).trace,
                              bicg_converted(A, b, x0, P, PrecSide::Left, cfg).trace),
              lim.congruency);
    rep.check("congruency", name + " two-sided(I,P)~bicg-conv-right",
              trace_deviation(bicg_two_sided(A, b, x0, WholeOnRight(P), cfg, Method::ConvertedRight).trace,
                              bicg_converted(A, b, x0, P, PrecSide::Right, cfg).trace),
              lim.congruency);
  }
}

/// ILU(0) of a full-pattern matrix is its exact LU factorisation.
inline void verify_ilu_exact(VerifyReport& rep, std::size_t n, std::uint64_t seed, const VerifyLimits& lim) {
  const CsrMatrix A = generate_random(n, 1.0, seed);
  const Ilu0Preconditioner P(A);
  const auto dense = verify::to_dense(A);
  SeededUniform rng(seed ^ 0x9e3779b97f4a7c15ULL);
  double worst = 0.0;
  for (std::size_t t = 0; t < lim.ilu_vectors; ++t) {
    Vector v(n);
    for (auto& e : v) e = rng.next(-1.0, 1.0);
    const Vector ref = verify::dense_solve(dense, v);
    worst = std::max(worst, norm2(subtract(P.solve(v), ref)) / norm2(ref));
  }
  rep.check("ilu-exact", "dense-" + std::to_string(n), worst, lim.ilu_exact);
}

} // namespace detail

/**
 * Runs the polynomial, biorthogonality, biconjugacy, ISRV-switching,
 * equivalence, BiCR, congruency and ILU-exactness checks on seeded
 * stencil and random matrices. Writes one PASS/FAIL line per check and a
 * summary; returns 0 if all pass, 4 otherwise, 1 on bad options.
 */
inline int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.sizes.empty()) throw InputError("verify needs at least one size");
    for (std::size_t m : opt.sizes) {
      if (m < 2 || m > 64) throw InputError("verify sizes must lie in [2, 64]");
    }
    const VerifyLimits lim;
    VerifyReport rep;
    bool corrupt = opt.inject_fault;
    for (std::size_t m : opt.sizes) {
      const std::size_t n = m * m;
      detail::verify_matrix(rep, "stencil-" + std::to_string(m), generate_stencil(m, 0.5, opt.seed), lim, corrupt);
      corrupt = false;
      const double density = std::min(1.0, 4.0 / static_cast<double>(n));
      detail::verify_matrix(rep, "random-" + std::to_string(n), generate_random(n, density, opt.seed + m), lim,
                            false);
      detail::verify_ilu_exact(rep, 2 * m, opt.seed + m, lim);
    }
    out << rep.finish();
    out.flush();
    return rep.ok() ? exit_converged : exit_verify_failed;
  });
}

} // namespace pbicg::cli
