// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Set KRYLOV_MATRIX_DIR to a directory holding sherman4.mtx to add that matrix
// to criteria 1-3.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pbicg/cli/commands.hpp"
#include "pbicg/cli/verify_suite.hpp"

using namespace pbicg;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Named {
  std::string name;
  CsrMatrix A;
};

char buf[64];
std::string fmt(double v) {
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Vector ones(std::size_t n) { return Vector(n, 1.0); }
Vector zeros(std::size_t n) { return Vector(n, 0.0); }

SolveResult run(const std::string& label, const CsrMatrix& A, const Ilu0Preconditioner& P, const SolverConfig& cfg) {
  return cli::run_variant(cli::parse_variant(label), A, matvec(A, ones(A.size())), zeros(A.size()), P, cfg);
}

/// Matrices for the direction criteria: the 32x32 stencil, plus sherman4 when available.
std::vector<Named> direction_matrices(std::string& note) {
  std::vector<Named> out{{"stencil-32", generate_stencil(32, 0.5)}};
  const char* dir = std::getenv("KRYLOV_MATRIX_DIR");
  const auto path = dir ? std::filesystem::path(dir) / "sherman4.mtx" : std::filesystem::path();
  if (dir && std::filesystem::is_regular_file(path)) {
    out.push_back({"sherman4", read_matrix_market(path)});
  } else {
    note = " [sherman4 not found under KRYLOV_MATRIX_DIR; generated matrices only]";
  }
  return out;
}

/// Seeded well-conditioned matrices with n <= 100.
std::vector<Named> small_matrices() {
  return {{"stencil-8", generate_stencil(8, 0.5, 7)},
          {"random-60", generate_random(60, 0.1, 3)},
          {"random-100", generate_random(100, 0.04, 5)}};
}

const char* all_variants[] = {"bicg",          "bicg:atr0",       "bicr",            "bicg-conv-left",
                              "bicg-conv-right", "bicg-conv-two",   "pbicg-right",     "pbicg-left",
                              "pbicg-std:isrv1", "pbicg-std:isrv2", "pbicg-std:isrv3", "pbicg-impr2"};

bool plain(const std::string& label) { return label.rfind("bicg:", 0) == 0 || label == "bicg" || label == "bicr"; }

Outcome isrv_switching() {
  std::string note;
  double worst = 0.0;
  bool ok = true;
  SolverConfig cfg;  // tol 1e-8
  for (const auto& [name, A] : direction_matrices(note)) {
    const Ilu0Preconditioner P(A);
    const std::pair<const char*, const char*> pairs[] = {{"bicg-conv-left", "pbicg-std:isrv1"},
                                                         {"bicg-conv-right", "pbicg-std:isrv2"},
                                                         {"bicg-conv-two", "pbicg-std:isrv3"}};
    for (const auto& [conv, standard] : pairs) {
      const auto a = run(conv, A, P, cfg);
      const auto b = run(standard, A, P, cfg);
      ok = ok && a.status == SolveStatus::Converged && b.status == SolveStatus::Converged &&
           a.iterations == b.iterations;
      const std::size_t n = std::min(a.iterations, b.iterations);
      worst = std::max(worst, verify::max_relative_deviation(a.trace.relres_alg, b.trace.relres_alg, n));
    }
  }
  ok = ok && worst <= 1e-6;
  return {ok, "max relres deviation " + fmt(worst) + " (limit 1.000e-06)" + note};
}

Outcome equivalence_and_distinctness(bool equivalence) {
  std::string note;
  double worst_equal = 0.0, worst_right = 0.0;
  std::string ranges;
  SolverConfig cfg;
  cfg.max_iter = 30;
  for (const auto& [name, A] : direction_matrices(note)) {
    const Ilu0Preconditioner P(A);
    const auto left = run("pbicg-left", A, P, cfg);
    const auto std1 = run("pbicg-std:isrv1", A, P, cfg);
    const auto impr = run("pbicg-impr2", A, P, cfg);
    const auto right = run("pbicg-right", A, P, cfg);
    const std::size_t k = std::min({left.iterations, std1.iterations, impr.iterations, right.iterations});
    ranges += (ranges.empty() ? " over k < " : ", k < ") + std::to_string(k) + " (" + name + ")";
    const std::vector<const SolveResult*> cls{&left, &std1, &impr};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        worst_equal = std::max(worst_equal, cli::series_deviation(cls[i]->trace, cls[j]->trace, k,
                                                                  cli::CompareSeries::AlphaBeta));
      }
    }
    const double dr = verify::max_relative_deviation(right.trace.alphas, left.trace.alphas, k);
    worst_right = name == "stencil-32" ? dr : std::min(worst_right, dr);
  }
  const std::string& span = ranges;
  if (equivalence) {
    return {worst_equal <= 1e-8,
            "max alpha/beta deviation left/std(isrv1)/improved2 " + fmt(worst_equal) + span + " (limit 1.000e-08)" +
                note};
  }
  return {worst_right > 1e-2, "max alpha deviation right vs left " + fmt(worst_right) + span + " (must exceed 1.000e-02)" +
                                  note};
}

Outcome cg_reduction() {
  const CsrMatrix A = generate_stencil(20, 0.0);
  const std::size_t n = A.size();
  const Vector b = matvec(A, ones(n));
  SolverConfig cfg;
  cfg.tol = 1e-14;
  cfg.record_vectors = true;
  const auto res = bicg(A, b, zeros(n), IsrvSpec::r0(), cfg);
  if (res.iterations < 16) return {false, "BiCG stopped after " + std::to_string(res.iterations) + " iterations"};

  // reference CG
  Vector x(n, 0.0), r = b, p = r;
  double rr = 0.0;
  for (double v : r) rr += v * v;
  double worst = 0.0;
  for (std::size_t k = 1; k <= 15; ++k) {
    Vector Ap(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto cols = A.row_cols(i);
      const auto vals = A.row_values(i);
      for (std::size_t t = 0; t < cols.size(); ++t) Ap[i] += vals[t] * p[cols[t]];
    }
    double pAp = 0.0;
    for (std::size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
    const double alpha = rr / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    double rr_next = 0.0;
    for (double v : r) rr_next += v * v;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + rr_next / rr * p[i];
    rr = rr_next;
    worst = std::max(worst, norm2(subtract(res.trace.vectors->x[k], x)) / norm2(x));
  }
  return {worst <= 1e-10, "max per-iterate deviation from CG over 15 iterations " + fmt(worst) + " (limit 1.000e-10)"};
}

template <class Check>
double over_small_matrices(Check&& check, SolverConfig cfg) {
  cfg.record_vectors = true;
  double worst = 0.0;
  for (const auto& [name, A] : small_matrices()) {
    const Ilu0Preconditioner P(A);
    const IdentityPreconditioner I(A.size());
    for (const char* label : all_variants) {
      const auto res = run(label, A, P, cfg);
      worst = std::max(worst, plain(label) ? check(A, I, res.trace) : check(A, P, res.trace));
    }
  }
  return worst;
}

Outcome orthogonality() {
  const double worst = over_small_matrices(
      [](const CsrMatrix& A, const auto& prec, const IterationTrace& t) {
        const auto rep = verify::check_orthogonality(A, prec, t, 8);
        return std::max(rep.max_offdiag_biortho, rep.max_offdiag_biconj);
      },
      SolverConfig{});
  return {worst <= 1e-8, "max normalised off-diagonal inner product, i,j <= 8 " + fmt(worst) + " (limit 1.000e-08)"};
}

Outcome polynomial() {
  const double worst = over_small_matrices(
      [](const CsrMatrix& A, const auto& prec, const IterationTrace& t) {
        return verify::check_polynomial_consistency(A, prec, t, 10);
      },
      SolverConfig{});
  return {worst <= 1e-8, "max residual reconstruction error, k <= 10 " + fmt(worst) + " (limit 1.000e-08)"};
}

Outcome bicr_correspondence() {
  const CsrMatrix A = generate_random(30, 0.2, 12);
  const Vector b = matvec(A, ones(30));
  const auto g = bicg(A, b, zeros(30), IsrvSpec::at_r0(), SolverConfig{});
  const auto r = bicr(A, b, zeros(30), SolverConfig{});
  const std::size_t k = std::min<std::size_t>({11, g.iterations, r.iterations});
  const double dev = cli::series_deviation(g.trace, r.trace, k, cli::CompareSeries::AlphaBeta);
  return {k == 11 && dev <= 1e-6,
          "max alpha/beta deviation over k <= " + std::to_string(k - 1) + " " + fmt(dev) + " (limit 1.000e-06)"};
}

Outcome congruency() {
  double worst = 0.0;
  for (const auto& [name, A] : {Named{"stencil-32", generate_stencil(32, 0.5)}, Named{"random-100", generate_random(100, 0.04, 5)}}) {
    const Ilu0Preconditioner P(A);
    const Vector b = matvec(A, ones(A.size()));
    const Vector x0 = zeros(A.size());
    const SolverConfig cfg;
    worst = std::max(worst, cli::detail::trace_deviation(
                                bicg_two_sided(A, b, x0, WholeOnLeft(P), cfg, Method::ConvertedLeft).trace,
                                bicg_converted(A, b, x0, P, PrecSide::Left, cfg).trace));
    worst = std::max(worst, cli::detail::trace_deviation(
                                bicg_two_sided(A, b, x0, WholeOnRight(P), cfg, Method::ConvertedRight).trace,
                                bicg_converted(A, b, x0, P, PrecSide::Right, cfg).trace));
  }
  return {worst <= 1e-12, "max trace deviation, split vs dedicated paths " + fmt(worst) + " (limit 1.000e-12)"};
}

Outcome ilu_exactness() {
  double worst = 0.0;
  for (std::size_t n : {20u, 50u}) {
    const CsrMatrix A = generate_random(n, 1.0, n);
    const Ilu0Preconditioner P(A);
    const auto D = verify::to_dense(A);
    SeededUniform rng(1000 + n);
    for (int t = 0; t < 100; ++t) {
      Vector v(n);
      for (auto& e : v) e = rng.next(-1.0, 1.0);
      const Vector ref = verify::dense_solve(D, v);
      worst = std::max(worst, norm2(subtract(P.solve(v), ref)) / norm2(ref));
    }
  }
  return {worst <= 1e-10, "max relative error vs dense solve, 100 vectors each for n = 20, 50 " + fmt(worst) +
                              " (limit 1.000e-10)"};
}

Outcome determinism() {
  const auto verify_once = [] {
    std::ostringstream out, err;
    const int code = cli::run_verify(cli::VerifyOptions{}, out, err);
    return std::to_string(code) + out.str();
  };
  const bool verify_same = verify_once() == verify_once();
  bool solve_same = true;
  for (const char* method : {"pbicg-right", "pbicg-left", "pbicg-std", "pbicg-impr2", "bicg-conv-two", "bicr"}) {
    cli::ExperimentConfig cfg;
    cfg.matrix = "gen:stencil:16:0.5:3";
    cfg.method = method;
    cfg.precond = cli::PrecondKind::Ilu0;
    std::ostringstream a, b, e;
    cli::run_solve(cfg, a, e);
    cli::run_solve(cfg, b, e);
    solve_same = solve_same && a.str() == b.str() && !a.str().empty();
  }
  return {verify_same && solve_same, std::string("verify report ") + (verify_same ? "identical" : "DIFFERS") +
                                         ", solve CSV " + (solve_same ? "identical" : "DIFFERS")};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ISRV switching", isrv_switching},
      {"variant equivalence", [] { return equivalence_and_distinctness(true); }},
      {"right-system distinctness", [] { return equivalence_and_distinctness(false); }},
      {"CG reduction", cg_reduction},
      {"biorthogonality/biconjugacy", orthogonality},
      {"polynomial oracle", polynomial},
      {"BiCR correspondence", bicr_correspondence},
      {"congruency", congruency},
      {"ILU(0) exactness", ilu_exactness},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
