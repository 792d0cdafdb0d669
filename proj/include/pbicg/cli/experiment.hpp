#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbicg/pbicg.hpp"

namespace pbicg::cli {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
  exit_converged = 0,
  exit_input_error = 1,
  exit_max_iter = 2,
  exit_breakdown = 3,
  exit_verify_failed = 4,
};

/// Bad command-line input: unknown names, malformed specs, missing files.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class PrecondKind { None, Ilu0 };
enum class RhsMode { Ones, Unit, File };

struct ExperimentConfig {
  std::string matrix;
  std::string method = "pbicg-std";
  std::optional<std::string> isrv;
  PrecondKind precond = PrecondKind::None;
  double tol = 1e-8;
  std::optional<std::size_t> max_iter;
  RhsMode rhs = RhsMode::Ones;
  std::string rhs_path;
  std::string output = "-";
};

// --- scalar parsing -----------------------------------------------------------

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::size_t parse_size(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw InputError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

inline double parse_real(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw InputError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

/// %.17g; non-finite values print as nan, inf, -inf on every platform.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short fixed-width form for report lines.
inline std::string format_short(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// --- matrices -------------------------------------------------------------------

inline std::optional<std::filesystem::path> locate_matrix_file(const std::string& spec) {
  namespace fs = std::filesystem;
  std::vector<fs::path> candidates{spec, spec + ".mtx"};
  if (const char* dir = std::getenv("KRYLOV_MATRIX_DIR"); dir && *dir) {
    candidates.emplace_back(fs::path(dir) / spec);
    candidates.emplace_back(fs::path(dir) / (spec + ".mtx"));
  }
  for (const auto& c : candidates) {
    std::error_code ec;
    if (fs::is_regular_file(c, ec)) return c;
  }
  return std::nullopt;
}

/**
 * gen:stencil:m:conv[:seed]   convection-diffusion on an m x m grid
 * gen:random:n:density:seed   diagonally dominant random sparse
 * gen:identity:n
 * anything else is a Matrix Market path, also tried with a .mtx suffix and
 * under $KRYLOV_MATRIX_DIR.
 */
inline CsrMatrix load_matrix(const std::string& spec) {
  if (spec.rfind("gen:", 0) == 0) {
    const auto f = split(spec, ':');
    try {
      if (f[1] == "stencil" && (f.size() == 4 || f.size() == 5)) {
        const std::uint64_t seed = f.size() == 5 ? parse_size(f[4], "seed") : 0;
        return generate_stencil(parse_size(f[2], "grid size"), parse_real(f[3], "convection"), seed);
      }
      if (f[1] == "random" && f.size() == 5) {
        return generate_random(parse_size(f[2], "size"), parse_real(f[3], "density"), parse_size(f[4], "seed"));
      }
      if (f[1] == "identity" && f.size() == 3) {
        const std::size_t n = parse_size(f[2], "size");
        if (n == 0) throw InputError("identity size must be positive");
        return CsrMatrix::identity(n);
      }
    } catch (const std::invalid_argument& e) {
      throw InputError(spec + ": " + e.what());
    }
    throw InputError("unknown generator spec '" + spec + "'");
  }
  const auto path = locate_matrix_file(spec);
  if (!path) throw InputError("matrix file not found: " + spec);
  try {
    return read_matrix_market(*path);
  } catch (const ParseError& e) {
    throw InputError(path->string() + ": " + e.what());
  }
}

// --- right-hand sides -------------------------------------------------------

/// Whitespace-separated values; '%' starts a comment line. A leading
/// Matrix Market array size line "n 1" is accepted.
inline Vector read_vector_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open right-hand side file: " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) vals.push_back(parse_real(tok, "right-hand side entry"));
  }
  if (vals.size() == n + 2 && vals[0] == static_cast<double>(n) && vals[1] == 1.0) {
    vals.erase(vals.begin(), vals.begin() + 2);
  }
  if (vals.size() != n) {
    throw InputError(path + ": expected " + std::to_string(n) + " values, found " + std::to_string(vals.size()));
  }
  return vals;
}

/// Ones: b = A * (1, ..., 1). Unit: b = e_1.
inline Vector make_rhs(const CsrMatrix& A, RhsMode mode, const std::string& path) {
  const std::size_t n = A.size();
  switch (mode) {
    case RhsMode::Ones: return matvec(A, Vector(n, 1.0));
    case RhsMode::Unit: {
      Vector b(n, 0.0);
      b[0] = 1.0;
      return b;
    }
    case RhsMode::File: return read_vector_file(path, n);
  }
  throw InputError("unknown right-hand side mode");
}

// --- preconditioners ----------------------------------------------------------

using AnyPreconditioner = std::variant<IdentityPreconditioner, Ilu0Preconditioner>;

/// May throw BreakdownError from the factorisation.
inline AnyPreconditioner make_preconditioner(PrecondKind kind, const CsrMatrix& A) {
  if (kind == PrecondKind::Ilu0) return Ilu0Preconditioner(A);
  return IdentityPreconditioner(A.size());
}

inline PrecondKind parse_precond(std::string_view name) {
  if (name == "none") return PrecondKind::None;
  if (name == "ilu0") return PrecondKind::Ilu0;
  throw InputError("unknown preconditioner '" + std::string(name) + "' (expected none or ilu0)");
}

inline RhsMode parse_rhs(std::string_view name) {
  if (name == "ones") return RhsMode::Ones;
  if (name == "unit") return RhsMode::Unit;
  if (name == "file") return RhsMode::File;
  throw InputError("unknown right-hand side mode '" + std::string(name) + "' (expected ones, unit or file)");
}

// --- solver variants ------------------------------------------------------------

/// One runnable solver: a method plus, for bicg and pbicg-std, its ISRV.
struct Variant {
  Method method = Method::Bicg;
  IsrvSpec isrv;
  std::string label;
};

inline bool takes_isrv(Method m) { return m == Method::Bicg || m == Method::PbicgStandard; }

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::Bicg, Method::ConvertedLeft, Method::ConvertedRight, Method::ConvertedTwoSided,
                   Method::PbicgRight, Method::PbicgLeft, Method::PbicgStandard, Method::PbicgImproved2,
                   Method::Bicr}) {
    if (to_string(m) == name) return m;
  }
  throw InputError("unknown method '" + std::string(name) + "'");
}

/// r0, isrv1, isrv2, isrv3, atr0 or custom:<matrix spec>.
inline IsrvSpec parse_isrv(std::string_view text) {
  if (text.rfind("custom:", 0) == 0) return IsrvSpec::with_matrix(load_matrix(std::string(text.substr(7))));
  for (IsrvKind k : {IsrvKind::R0, IsrvKind::Isrv1, IsrvKind::Isrv2, IsrvKind::Isrv3, IsrvKind::AtR0}) {
    if (to_string(k) == text) return {k, std::nullopt};
  }
  throw InputError("unknown ISRV '" + std::string(text) + "'");
}

/// Method name with an optional ISRV; bicg defaults to r0, pbicg-std to isrv1.
inline Variant make_variant(std::string_view method, std::optional<std::string_view> isrv) {
  Variant v;
  v.method = parse_method(method);
  v.label = std::string(method);
  if (isrv && !takes_isrv(v.method)) {
    throw InputError("method '" + std::string(method) + "' does not take an ISRV");
  }
  if (takes_isrv(v.method)) {
    const std::string_view name = isrv.value_or(v.method == Method::Bicg ? "r0" : "isrv1");
    v.isrv = parse_isrv(name);
    v.label += ":" + std::string(name);
  }
  return v;
}

/// "method" or "method:isrv", e.g. pbicg-std:isrv2 or bicg:custom:gen:identity:8.
inline Variant parse_variant(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return make_variant(text, std::nullopt);
  return make_variant(text.substr(0, colon), text.substr(colon + 1));
}

/// bicg and bicr ignore the preconditioner.
template <Preconditioner P>
SolveResult run_variant(const Variant& v, const CsrMatrix& A, std::span<const double> b,
                        std::span<const double> x0, const P& prec, const SolverConfig& cfg) {
  switch (v.method) {
    case Method::Bicg: return bicg(A, b, x0, v.isrv, cfg);
    case Method::ConvertedLeft: return bicg_converted(A, b, x0, prec, PrecSide::Left, cfg);
    case Method::ConvertedRight: return bicg_converted(A, b, x0, prec, PrecSide::Right, cfg);
    case Method::ConvertedTwoSided: return bicg_converted(A, b, x0, prec, PrecSide::TwoSided, cfg);
    case Method::PbicgRight: return pbicg_right(A, b, x0, prec, cfg);
    case Method::PbicgLeft: return pbicg_left(A, b, x0, prec, cfg);
    case Method::PbicgStandard: return pbicg_standard(A, b, x0, prec, v.isrv, cfg);
    case Method::PbicgImproved2: return pbicg_improved2(A, b, x0, prec, cfg);
    case Method::Bicr: return bicr(A, b, x0, cfg);
  }
  throw std::invalid_argument("run_variant: unknown method");
}

inline SolveResult run_variant(const Variant& v, const CsrMatrix& A, std::span<const double> b,
                               std::span<const double> x0, const AnyPreconditioner& prec,
                               const SolverConfig& cfg) {
  return std::visit([&](const auto& p) { return run_variant(v, A, b, x0, p, cfg); }, prec);
}

inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return exit_converged;
    case SolveStatus::MaxIter: return exit_max_iter;
    case SolveStatus::Breakdown: return exit_breakdown;
  }
  return exit_input_error;
}

// --- output -------------------------------------------------------------------

/// k,alpha,beta,relres_alg,relres_true
inline std::string trace_csv(const IterationTrace& t) {
  std::string out = "k,alpha,beta,relres_alg,relres_true\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    out += std::to_string(k) + "," + format_real(t.alphas[k]) + "," + format_real(t.betas[k]) + "," +
           format_real(t.relres_alg[k]) + "," + format_real(t.relres_true[k]) + "\n";
  }
  return out;
}

/// "-" is standard output.
inline void write_text(const std::string& path, const std::string& text, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << text;
    stdout_stream.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open output file: " + path);
  f << text;
  if (!f) throw InputError("failed writing output file: " + path);
}

} // namespace pbicg::cli
