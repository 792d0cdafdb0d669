#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pbicg/errors.hpp"
#include "pbicg/matcore/csr_matrix.hpp"

namespace pbicg {

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

} // namespace detail

// Coordinate real general/symmetric only. Symmetric storage is expanded to
// full; duplicates are summed.
inline CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) {
    throw ParseError(0, "empty input");
  }
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") {
    throw ParseError(lineno, "missing %%MatrixMarket banner");
  }
  object = detail::lowercase(object);
  format = detail::lowercase(format);
  field = detail::lowercase(field);
  symmetry = detail::lowercase(symmetry);
  if (object != "matrix") throw ParseError(lineno, "unsupported object '" + object + "'");
  if (format != "coordinate") throw ParseError(lineno, "unsupported format '" + format + "'");
  if (field != "real") throw ParseError(lineno, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError(lineno, "unsupported symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";

  // size line, after comments
  std::size_t rows = 0, cols = 0, declared = 0;
  for (;;) {
    if (!std::getline(in, line)) throw ParseError(0, "missing size line");
    ++lineno;
    if (line.empty() || line[0] == '%' || detail::is_blank(line)) continue;
    std::istringstream ss(line);
    long long r = -1, c = -1, z = -1;
    std::string rest;
    if (!(ss >> r >> c >> z) || (ss >> rest) || r < 0 || c < 0 || z < 0) {
      throw ParseError(lineno, "malformed size line");
    }
    rows = static_cast<std::size_t>(r);
    cols = static_cast<std::size_t>(c);
    declared = static_cast<std::size_t>(z);
    break;
  }
  if (rows != cols) {
    throw ParseError(lineno, "matrix is not square (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }

  std::vector<Triplet> entries;
  entries.reserve(symmetric ? 2 * declared : declared);
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || detail::is_blank(line)) continue;
    if (seen == declared) throw ParseError(lineno, "more entries than declared");
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double v = 0.0;
    std::string rest;
    if (!(ss >> i >> j >> v) || (ss >> rest)) {
      throw ParseError(lineno, "malformed entry");
    }
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols) {
      throw ParseError(lineno, "index out of range");
    }
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    entries.push_back({r, c, v});
    if (symmetric && r != c) entries.push_back({c, r, v});
    ++seen;
  }
  if (seen != declared) {
    throw ParseError(lineno, "expected " + std::to_string(declared) + " entries, found " + std::to_string(seen));
  }
  return CsrMatrix::from_triplets(rows, std::move(entries));
}

inline CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix_market(in);
}

/// Writes `coordinate real general` with %.17g values (exact round trip).
inline void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.size() << ' ' << A.size() << ' ' << A.nnz() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < A.size(); ++i) {
    auto cols = A.row_cols(i);
    auto vals = A.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
      out << (i + 1) << ' ' << (cols[k] + 1) << ' ' << buf << '\n';
    }
  }
}

} // namespace pbicg
