#include "ddelta/error.hpp"

namespace ddelta {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::NotEntire: return "NotEntire";
    case ErrorKind::BothZero: return "BothZero";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NoRationalCofactors: return "NoRationalCofactors";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BoundaryZero: return "BoundaryZero";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ResonantDenominator: return "ResonantDenominator";
    case ErrorKind::NotRetarded: return "NotRetarded";
    case ErrorKind::TruncationTooShort: return "TruncationTooShort";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorKind::EnvelopeCapExceeded: return "EnvelopeCapExceeded";
    case ErrorKind::EnvelopeViolation: return "EnvelopeViolation";
    case ErrorKind::DuplicateNode: return "DuplicateNode";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::NonPolynomialDenominator: return "NonPolynomialDenominator";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace ddelta
