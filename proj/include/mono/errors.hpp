#pragma once

#include <stdexcept>
#include <string>

namespace mono {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input text could not be parsed. Carries a 1-based line number when known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_number(line) {}
  long line_number = 0;
};

// A stated data invariant does not hold (e.g. a factorization entry that is
// not a positive twist, or a matrix with determinant != 1).
struct InvariantViolationError : Error {
  using Error::Error;
};

// The global monodromy is not of an admissible shape; the caller must
// blow-up-normalize first.
struct NotAdmissibleError : Error {
  using Error::Error;
};

// A configured enumeration budget would be exceeded.
struct BudgetError : Error {
  using Error::Error;
};

// A fiberwise-singular surface map over the sphere requires trivial global
// monodromy; this input has a non-trivial one.
struct NotAFibrationOverSphereError : Error {
  using Error::Error;
};

}  // namespace mono
