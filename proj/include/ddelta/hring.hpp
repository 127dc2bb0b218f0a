#pragma once

// The ring H of quotients p(z, sigma) / phi(z) whose characteristic function
// p(z, e^z) / phi(z) is entire, over Gaussian-rational coefficients.
//
// Exact decisions rest on Lindemann-Weierstrass: at an algebraic point a != 0
// the numbers e^{ja} are linearly independent over the algebraic numbers, so
// sum_j c_j(a) e^{ja} = 0 forces every c_j(a) = 0. At a = 0 the Taylor series
// is rational and is used instead.

#include <optional>
#include <string>
#include <vector>

#include "ddelta/exppoly.hpp"

namespace ddelta {

/// One squarefree part of a denominator together with the evidence that the
/// numerator vanishes to at least `multiplicity` at each of its roots.
struct CertificateEntry {
  PolyC factor;
  int multiplicity = 0;
  /// "taylor" for the factor z, "ladder" otherwise.
  std::string method;
  /// Taylor: the vanishing order found. Ladder: the number of derivative
  /// levels checked (equal to multiplicity).
  int order = 0;
  /// Ladder: the sigma exponents j whose coefficient c_{k,j} is divisible by
  /// factor, one list per level k < multiplicity.
  std::vector<std::vector<int>> divisible;
};

struct EntiretyCertificate {
  std::vector<CertificateEntry> entries;
};

struct EntiretyWitness {
  PolyC factor;
  int required = 0;
  int actual = 0;
  /// For ladder refusals: the derivative level and sigma exponent of the
  /// first coefficient not divisible by factor.
  int level = -1;
  int sigma = 0;
  PolyC coefficient;
  std::string to_string() const;
};

struct EntiretyResult {
  bool entire = false;
  EntiretyCertificate certificate;
  std::optional<EntiretyWitness> witness;
  explicit operator bool() const { return entire; }
};

EntiretyResult is_entire(const ExpPoly& num, const PolyC& den);
/// Re-derives every fact of a certificate exactly.
bool replay_certificate(const ExpPoly& num, const PolyC& den, const EntiretyCertificate& cert);

/// Units of H are c * sigma^k.
struct Unit {
  GaussianRational c{1};
  int k = 0;
  friend bool operator==(const Unit& a, const Unit& b) { return a.c == b.c && a.k == b.k; }
};

/// Canonical element c * sigma^k * num / den of H: num has sigma-valuation 0
/// and monic leading coefficient polynomial, den is monic and coprime to the
/// content of num.
class HElement {
 public:
  HElement() = default;  // zero
  HElement(GaussianRational c);  // NOLINT(google-explicit-constructor)
  HElement(const ExpPoly& p);    // NOLINT(google-explicit-constructor)

  const ExpPoly& num() const { return num_; }
  const PolyC& den() const { return den_; }
  const Unit& unit() const { return unit_; }
  const EntiretyCertificate& certificate() const { return certificate_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_unit() const { return !is_zero() && num_.sigma_degree() == 0 && num_.coeff(0).degree() == 0 && den_.degree() == 0; }
  /// c * sigma^k * num.
  ExpPoly full_numerator() const;

  /// q*(z), using a mean-value circle near roots of den.
  Complex eval(Complex z) const;
  Complex eval_derivative(Complex z) const;

  HElement operator-() const;
  friend HElement operator+(const HElement& a, const HElement& b);
  friend HElement operator-(const HElement& a, const HElement& b);
  friend HElement operator*(const HElement& a, const HElement& b);
  friend bool operator==(const HElement& a, const HElement& b) {
    return a.num_ == b.num_ && a.den_ == b.den_ && (a.is_zero() || a.unit_ == b.unit_);
  }
  friend bool operator!=(const HElement& a, const HElement& b) { return !(a == b); }
  bool same_up_to_unit(const HElement& o) const { return num_ == o.num_ && den_ == o.den_; }
  /// The same element with its unit dropped.
  HElement associate() const;
  /// Inverse of a unit element.
  HElement unit_inverse() const;

  std::string to_string() const;

 private:
  friend HElement h_normalize(const ExpPoly& num, const PolyC& den);
  void compile();
  Complex eval_direct(Complex z) const;
  Complex eval_derivative_direct(Complex z) const;
  /// Radius of a circle around z that keeps away from every root of den,
  /// or 0 when z itself is far enough.
  double mean_value_radius(Complex z) const;

  ExpPoly num_;
  PolyC den_{GaussianRational(1)};
  Unit unit_;
  EntiretyCertificate certificate_;
  CompiledExpPoly fnum_, dfnum_;
  std::vector<Complex> den_roots_;
};

/// Throws NotEntire (with the witness) or ZeroDenominator.
HElement h_normalize(const ExpPoly& num, const PolyC& den);
/// Builds c * sigma^k.
HElement h_unit(const Unit& u);

struct DivisionResult {
  enum class Failure { None, SigmaDivision, Entirety };
  std::optional<HElement> quotient;
  Failure failure = Failure::None;
  std::string detail;
  explicit operator bool() const { return quotient.has_value(); }
};

/// Quotient q with q * a = b when b / a lies in H.
DivisionResult h_divides(const HElement& a, const HElement& b);

struct ZeroDivisorFactor {
  PolyC factor;
  int multiplicity = 0;
};
using ZeroDivisorPart = std::vector<ZeroDivisorFactor>;

/// All algebraic zeros of a*, grouped into coprime squarefree parts with
/// exact multiplicities.
ZeroDivisorPart algebraic_zero_divisor(const HElement& a);

/// Greatest common divisor up to units (returned with trivial unit).
HElement h_gcd(const HElement& a, const HElement& b);

struct BezoutOptions {
  /// Enables the jet correction at resultant roots when the extended-Euclid
  /// cofactors are not in H.
  bool jet_correction = true;
};

struct BezoutResult {
  HElement g, u, v;
  int tier = 0;  // 0: a unit cofactor, 1: extended Euclid, 2: jet corrected
};

/// u*a + v*b = g = h_gcd(a, b). Throws NoRationalCofactors when no cofactors
/// with Q(i) coefficients exist (or tier 2 is disabled and needed).
BezoutResult h_bezout(const HElement& a, const HElement& b, const BezoutOptions& opts = {});

/// Exact quotient of exponential polynomials; throws if b does not divide a in
/// Q(i)[z, sigma^{+-1}].
ExpPoly ep_exact_div(const ExpPoly& a, const ExpPoly& b);

namespace detail {

/// Squarefree part s (coprime to z) split so that the vanishing order of e*
/// is the same at every root of each piece. Orders are capped at `cap` when
/// cap >= 0.
struct OrderPart {
  PolyC part;
  int order = 0;
  int sigma = 0;  // exponent of the first non-divisible coefficient
  PolyC coefficient;
};
std::vector<OrderPart> ladder_orders(const ExpPoly& e, const PolyC& s, int cap = -1);

/// Common refinement for several functions at once.
struct RefinedPart {
  PolyC part;
  std::vector<int> orders;
};
std::vector<RefinedPart> refine_orders(const PolyC& s, const std::vector<ExpPoly>& fns);

}  // namespace detail

}  // namespace ddelta
