#pragma once

#include <stdexcept>
#include <string>

namespace tvgp {

/// Incompatible tensor/matrix dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter outside its mathematical domain (|rho| >= 1, nonpositive scale, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Violated operation precondition that is neither a shape nor a domain issue.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cholesky factorization failed; `pivot()` is the zero-based failing pivot.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, long pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  [[nodiscard]] long pivot() const noexcept { return pivot_; }

 private:
  long pivot_;
};

/// A computed quantity came out NaN or infinite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; `line()` is one-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tvgp
