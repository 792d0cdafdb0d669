#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbicg {

/// Operand lengths or matrix dimensions do not agree.
class DimensionMismatch : public std::invalid_argument {
public:
  DimensionMismatch(const std::string& where, std::size_t expected, std::size_t actual)
      : std::invalid_argument(where + ": dimension mismatch (expected " + std::to_string(expected) +
                              ", got " + std::to_string(actual) + ")") {}
};

/// Malformed Matrix Market input. `line()` is 1-based; 0 means end of input.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A pivot or recurrence denominator vanished.
class BreakdownError : public std::runtime_error {
public:
  BreakdownError(std::string stage, std::size_t index)
      : std::runtime_error("breakdown in " + stage + " at index " + std::to_string(index)),
        stage_(std::move(stage)), index_(index) {}

  const std::string& stage() const noexcept { return stage_; }
  std::size_t index() const noexcept { return index_; }

private:
  std::string stage_;
  std::size_t index_;
};

/// The initial shadow residual is (numerically) orthogonal to the initial residual.
class InitialShadowDegenerate : public std::runtime_error {
public:
  explicit InitialShadowDegenerate(double inner)
      : std::runtime_error("initial shadow residual is orthogonal to the initial residual (<r*0, r0> = " +
                           std::to_string(inner) + ")") {}
};

} // namespace pbicg
