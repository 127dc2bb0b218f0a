#pragma once

// Operator expressions such as "s^2 - 2*s + 1" or "(s-1)/z" and matrices
// "[[s-1],[z]]". Grammar:
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' int)?
//   atom   := 'z' | 'z2' | 's' | 'i' | literal | '(' expr ')'
//   matrix := '[' row (',' row)* ']'
//   row    := '[' expr (',' expr)* ']'
//
// Literals are exact: 3, 1/2, 0.25, 3/4i. Division and negative powers need a
// divisor polynomial in z, or c s^k.

#include <string>

#include "ddelta/matsmith.hpp"

namespace ddelta {

/// Throws SyntaxError (with a column), NonPolynomialDenominator, NotEntire.
HElement parse_operator(const std::string& text);
HMatrix parse_matrix(const std::string& text);

/// q(z) z2^alpha, the form accepted by the hefer subcommand.
struct HeferInput {
  HElement q;
  int alpha = 0;
};
HeferInput parse_hefer_input(const std::string& text);

/// Exact literal as printed by GaussianRational (parentheses optional).
GaussianRational parse_gaussian(const std::string& text);

/// Printer; parse_operator(print(h)) == h.
std::string print(const HElement& h);
std::string print(const HMatrix& m);

}  // namespace ddelta
