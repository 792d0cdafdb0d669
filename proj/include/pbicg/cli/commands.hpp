#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pbicg/cli/experiment.hpp"

namespace pbicg::cli {

/// Runs `body` and maps library and input exceptions to exit codes, writing
/// a one-line diagnostic to `err`.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_input_error;
  } catch (const BreakdownError& e) {
    err << "breakdown: " << e.what() << '\n';
    return exit_breakdown;
  } catch (const InitialShadowDegenerate& e) {
    err << "breakdown: " << e.what() << '\n';
    return exit_breakdown;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_input_error;
  }
}

/// Single solve; writes the per-iteration CSV and returns 0/2/3, or 1 on bad input.
inline int run_solve(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Variant variant = make_variant(cfg.method, cfg.isrv);
    SolverConfig scfg;
    scfg.tol = cfg.tol;
    scfg.max_iter = cfg.max_iter;
    scfg.validate();
    const CsrMatrix A = load_matrix(cfg.matrix);
    const Vector b = make_rhs(A, cfg.rhs, cfg.rhs_path);
    const Vector x0(A.size(), 0.0);
    const AnyPreconditioner prec = make_preconditioner(cfg.precond, A);

    const SolveResult res = run_variant(variant, A, b, x0, prec, scfg);
    write_text(cfg.output, trace_csv(res.trace), out);
    err << variant.label << ": " << to_string(res.status) << " after " << res.iterations << " iterations";
    if (res.breakdown) err << " (" << res.breakdown->stage << " vanished at k=" << res.breakdown->iteration << ")";
    if (!res.trace.relres_true.empty()) err << ", true relres " << format_short(res.trace.relres_true.back());
    err << '\n';
    return exit_code(res.status);
  });
}

enum class CompareSeries { AlphaBeta, Relres };

struct CompareConfig {
  std::string matrix;
  std::vector<std::string> variants;
  std::size_t k_max = 30;
  CompareSeries series = CompareSeries::AlphaBeta;
  PrecondKind precond = PrecondKind::None;
  double tol = 1e-8;
  double agree = 1e-8;
  double differ = 1e-2;
  RhsMode rhs = RhsMode::Ones;
  std::string rhs_path;
  std::string output = "-";
};

inline CompareSeries parse_series(std::string_view name) {
  if (name == "alphabeta") return CompareSeries::AlphaBeta;
  if (name == "relres") return CompareSeries::Relres;
  throw InputError("unknown series '" + std::string(name) + "' (expected alphabeta or relres)");
}

/// Largest index n <= count such that neither series holds NaN at n-1.
/// A converged run leaves its last beta undefined.
inline std::size_t defined_prefix(const std::vector<double>& a, const std::vector<double>& b, std::size_t count) {
  while (count > 0 && (std::isnan(a[count - 1]) || std::isnan(b[count - 1]))) --count;
  return count;
}

/// Max relative deviation of the compared series over the first `count`
/// iterations of both traces.
inline double series_deviation(const IterationTrace& t1, const IterationTrace& t2, std::size_t count,
                               CompareSeries series) {
  if (series == CompareSeries::Relres) {
    return verify::max_relative_deviation(t1.relres_alg, t2.relres_alg, count);
  }
  const double da = verify::max_relative_deviation(t1.alphas, t2.alphas, count);
  const double db = verify::max_relative_deviation(t1.betas, t2.betas, defined_prefix(t1.betas, t2.betas, count));
  return std::max(da, db);
}

/// agree / differ / inconclusive against the two thresholds.
inline std::string classify(double deviation, double agree, double differ) {
  if (deviation <= agree) return "agree";
  if (deviation > differ) return "differ";
  return "inconclusive";
}

/**
 * Solves with every variant (capped at k_max iterations), writes a wide CSV
 * of the chosen series and one verdict line per pair plus an overall one.
 * Verdicts go to `out` when the CSV goes to a file and to `err` otherwise.
 * A failing variant is reported and skipped. Returns 0, 3 if any variant
 * failed, or 1 on bad input.
 */
inline int run_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (cfg.variants.size() < 2) throw InputError("compare needs at least two variants");
    if (cfg.k_max == 0) throw InputError("k-max must be positive");
    if (!(cfg.agree > 0.0) || !(cfg.differ >= cfg.agree)) {
      throw InputError("thresholds must satisfy 0 < agree <= differ");
    }
    std::vector<Variant> variants;
    for (const auto& v : cfg.variants) variants.push_back(parse_variant(v));
    SolverConfig scfg;
    scfg.tol = cfg.tol;
    scfg.max_iter = cfg.k_max;
    scfg.validate();
    const CsrMatrix A = load_matrix(cfg.matrix);
    const Vector b = make_rhs(A, cfg.rhs, cfg.rhs_path);
    const Vector x0(A.size(), 0.0);
    const AnyPreconditioner prec = make_preconditioner(cfg.precond, A);

    std::ostream& verdicts = cfg.output == "-" ? err : out;
    std::vector<std::optional<IterationTrace>> traces;
    bool any_failed = false;
    for (const auto& v : variants) {
      try {
        traces.emplace_back(run_variant(v, A, b, x0, prec, scfg).trace);
      } catch (const std::exception& e) {
        traces.emplace_back(std::nullopt);
        any_failed = true;
        verdicts << "verdict variant=" << v.label << " result=error reason=\"" << e.what() << "\"\n";
      }
    }

    std::size_t rows = 0;
    for (const auto& t : traces) {
      if (t) rows = std::max(rows, std::min(cfg.k_max, t->size()));
    }
    std::vector<std::pair<std::string, const std::vector<double> IterationTrace::*>> columns;
    if (cfg.series == CompareSeries::AlphaBeta) {
      columns = {{"alpha_", &IterationTrace::alphas}, {"beta_", &IterationTrace::betas}};
    } else {
      columns = {{"relres_", &IterationTrace::relres_alg}};
    }
    std::string csv = "k";
    for (const auto& [prefix, member] : columns) {
      for (const auto& v : variants) csv += "," + prefix + v.label;
    }
    csv += '\n';
    for (std::size_t k = 0; k < rows; ++k) {
      csv += std::to_string(k);
      for (const auto& [prefix, member] : columns) {
        for (const auto& t : traces) {
          csv += ',';
          if (t && k < t->size()) csv += format_real(((*t).*member)[k]);
        }
      }
      csv += '\n';
    }
    write_text(cfg.output, csv, out);

    std::size_t n_agree = 0, n_differ = 0, n_pairs = 0;
    for (std::size_t i = 0; i < variants.size(); ++i) {
      for (std::size_t j = i + 1; j < variants.size(); ++j) {
        if (!traces[i] || !traces[j]) continue;
        const std::size_t count = std::min({cfg.k_max, traces[i]->size(), traces[j]->size()});
        std::string result = "inconclusive";
        double dev = 0.0;
        if (count > 0) {
          dev = series_deviation(*traces[i], *traces[j], count, cfg.series);
          result = classify(dev, cfg.agree, cfg.differ);
        }
        ++n_pairs;
        n_agree += result == "agree";
        n_differ += result == "differ";
        verdicts << "verdict pair=" << variants[i].label << "," << variants[j].label << " k=" << count
                 << " max_rel=" << format_short(dev) << " result=" << result << '\n';
      }
    }
    std::string overall = "mixed";
    if (n_pairs == 0) overall = "none";
    else if (n_agree == n_pairs) overall = "agree";
    else if (n_differ == n_pairs) overall = "differ";
    verdicts << "verdict overall=" << overall << '\n';
    verdicts.flush();
    return any_failed ? exit_breakdown : exit_converged;
  });
}

} // namespace pbicg::cli
