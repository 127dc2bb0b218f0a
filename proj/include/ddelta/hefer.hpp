#pragma once

// Difference quotients (q(zeta1) - q(z1)) / (zeta1 - z1) of elements of H, the
// two-variable Hefer pair, and Paley-Wiener growth bounds.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ddelta/hring.hpp"

namespace ddelta {

/// Laurent polynomial over Q(i) in zeta1, z1, e^{zeta1}, e^{z1}, zeta2, z2
/// (only the exponential slots may carry negative exponents).
class MPoly {
 public:
  using Exponent = std::array<int, 6>;
  enum Var { Zeta1 = 0, Z1, EZeta1, EZ1, Zeta2, Z2 };

  MPoly() = default;
  MPoly(GaussianRational c);  // NOLINT(google-explicit-constructor)
  static MPoly var(Var v, int power = 1);

  const std::map<Exponent, GaussianRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }
  std::string to_string() const;

 private:
  std::map<Exponent, GaussianRational> terms_;
};

/// A finite sum of products c * u(zeta1) * v(z1) * quotients * zeta2^a z2^b.
class TwoVarExpPoly {
 public:
  struct Term {
    GaussianRational coeff{1};
    std::vector<HElement> at_zeta, at_z, quotients;
    int zeta2 = 0, z2 = 0;
  };

  TwoVarExpPoly() = default;
  static TwoVarExpPoly constant(const GaussianRational& c);
  static TwoVarExpPoly at_zeta(const HElement& q);
  static TwoVarExpPoly at_z(const HElement& q);
  /// The atom (q(zeta1) - q(z1)) / (zeta1 - z1), kept unexpanded.
  static TwoVarExpPoly quotient_atom(const HElement& q);
  static TwoVarExpPoly monomial2(int zeta2_power, int z2_power);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend TwoVarExpPoly operator+(const TwoVarExpPoly& a, const TwoVarExpPoly& b);
  friend TwoVarExpPoly operator-(const TwoVarExpPoly& a, const TwoVarExpPoly& b);
  friend TwoVarExpPoly operator*(const TwoVarExpPoly& a, const TwoVarExpPoly& b);
  TwoVarExpPoly operator-() const;

  /// Numerator and denominator in the field of fractions of MPoly.
  std::pair<MPoly, MPoly> to_fraction() const;
  /// Exact: the expressions agree as functions.
  bool equals(const TwoVarExpPoly& o) const;
  /// Quotient atoms use the derivative when |zeta1 - z1| < 1e-8.
  Complex eval(Complex zeta1, Complex z1, Complex zeta2 = 0, Complex z2 = 0) const;
  std::string to_string() const;

 private:
  void normalize();
  std::vector<Term> terms_;
};

/// p(zeta, z) with (zeta - z) p = q(zeta) - q(z). The polynomial part of q is
/// expanded; the rest stays a quotient atom with the constant term removed.
TwoVarExpPoly hefer_quotient(const HElement& q);

struct HeferPair {
  TwoVarExpPoly h1, h2;
  bool identity_ok = false;
  std::string transcript;
};
/// h1 (zeta1 - z1) + h2 (zeta2 - z2) = q(zeta1) zeta2^alpha - q(z1) z2^alpha.
HeferPair hefer_pair_n2(const HElement& q, int alpha);

struct GrowthBounds {
  int M = 0;
  int N = 0;
  double C = 0;
};
/// |q*(z)| <= C (1+|z|)^M e^{N |Re z|}, certified on sample grids.
GrowthBounds growth_bounds(const HElement& q);

struct HeferGrowthReport {
  int M = 0;
  int N = 0;
  double C = 0;
  size_t samples = 0;
  double outer_ratio = 0;  // max ratio on the outer samples over the inner fit
  bool dominated = false;
};
/// Samples the Hefer quotient on an n^2 x n^2 grid over [-r, r]^2 x [-r, r]^2.
/// Throws EnvelopeViolation.
HeferGrowthReport hefer_growth_check(const HElement& q, double r = 5.0, int n = 11);

}  // namespace ddelta
