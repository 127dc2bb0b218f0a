#pragma once

#include <stdexcept>
#include <string>

namespace ddelta {

enum class ErrorKind {
  DivisionByZero = 10,
  ZeroDenominator,
  NotEntire,
  BothZero,
  Overflow,
  NoRationalCofactors,
  DimensionMismatch = 20,
  BoundaryZero = 30,
  NonConvergence,
  ResonantDenominator = 40,
  NotRetarded,
  TruncationTooShort,
  IllConditioned,
  QuadratureDivergence = 50,
  EnvelopeCapExceeded,
  EnvelopeViolation,
  DuplicateNode = 60,
  SyntaxError = 70,
  NonPolynomialDenominator,
  SchemaViolation,
  Usage,
};

const char* error_kind_name(ErrorKind kind);

// Every module error is reported through this type; the CLI maps kind() to
// its exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace ddelta
