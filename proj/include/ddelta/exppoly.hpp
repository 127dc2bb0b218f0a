#pragma once

// Exact arithmetic for Gaussian-rational polynomials in z and exponential
// polynomials sum_j p_j(z) sigma^j, where sigma stands for e^z.

#include <gmpxx.h>

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ddelta/error.hpp"

namespace ddelta {

using Complex = std::complex<double>;

/// Element of Q(i). Both parts are canonical GMP rationals.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  static GaussianRational from_fraction(long num, long den);
  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  // Lexicographic on (re, im); only used for deterministic ordering.
  friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
    if (a.re_ != b.re_) return a.re_ < b.re_;
    return a.im_ < b.im_;
  }

  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Dense univariate polynomial over Q(i); coeffs()[k] is the z^k coefficient.
class PolyC {
 public:
  PolyC() = default;
  PolyC(GaussianRational c);  // NOLINT(google-explicit-constructor)
  explicit PolyC(std::vector<GaussianRational> coeffs);
  static PolyC z() { return PolyC({GaussianRational(0), GaussianRational(1)}); }
  static PolyC monomial(const GaussianRational& c, int degree);
  static PolyC from_ints(std::initializer_list<long> coeffs);

  const std::vector<GaussianRational>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0].is_one(); }
  GaussianRational operator[](int k) const;
  const GaussianRational& leading() const { return coeffs_.back(); }

  PolyC monic() const;
  PolyC derivative() const;
  /// p(z + c).
  PolyC shifted(const GaussianRational& c) const;
  /// Smallest k with coefficient of z^k nonzero; -1 for the zero polynomial.
  int valuation() const;
  /// Content-free real check: true iff every coefficient lies in Q.
  bool is_real() const;

  GaussianRational eval(const GaussianRational& x) const;
  Complex eval(Complex x) const;

  PolyC operator-() const;
  PolyC& operator+=(const PolyC& o);
  PolyC& operator-=(const PolyC& o);
  PolyC& operator*=(const PolyC& o);
  PolyC& operator*=(const GaussianRational& c);

  friend PolyC operator+(PolyC a, const PolyC& b) { return a += b; }
  friend PolyC operator-(PolyC a, const PolyC& b) { return a -= b; }
  friend PolyC operator*(const PolyC& a, const PolyC& b);
  friend PolyC operator*(PolyC a, const GaussianRational& c) { return a *= c; }
  friend PolyC operator*(const GaussianRational& c, PolyC a) { return a *= c; }
  friend bool operator==(const PolyC& a, const PolyC& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const PolyC& a, const PolyC& b) { return !(a == b); }
  friend bool operator<(const PolyC& a, const PolyC& b);

  std::string to_string(const std::string& var = "z") const;

 private:
  void trim();
  std::vector<GaussianRational> coeffs_;
};

struct PolyDivMod {
  PolyC quotient;
  PolyC remainder;
};

PolyDivMod poly_divmod(const PolyC& a, const PolyC& b);
bool poly_divides(const PolyC& d, const PolyC& a);
/// a / b when b divides a exactly; throws DivisionByZero otherwise.
PolyC poly_exact_div(const PolyC& a, const PolyC& b);
/// Monic gcd; gcd(0, 0) = 0.
PolyC poly_gcd(const PolyC& a, const PolyC& b);
PolyC poly_lcm(const PolyC& a, const PolyC& b);
PolyC poly_pow(const PolyC& p, int n);
/// Square-free decomposition p = c * prod s_i^i with s_i monic, squarefree
/// and pairwise coprime. Only nonconstant factors are returned.
std::vector<std::pair<PolyC, int>> squarefree_decomposition(const PolyC& p);
/// Monic squarefree part of p.
PolyC squarefree_part(const PolyC& p);
/// Extended gcd: s*a + t*b = g with g monic.
struct PolyXgcd {
  PolyC g, s, t;
};
PolyXgcd poly_xgcd(const PolyC& a, const PolyC& b);

/// Element of Q(i)(z), kept reduced with monic denominator.
class RatFunc {
 public:
  RatFunc() : den_(GaussianRational(1)) {}
  RatFunc(PolyC num);  // NOLINT(google-explicit-constructor)
  RatFunc(PolyC num, PolyC den);

  const PolyC& num() const { return num_; }
  const PolyC& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }

  RatFunc operator-() const { return RatFunc(-num_, den_); }
  RatFunc inverse() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string to_string() const;

 private:
  PolyC num_;
  PolyC den_;
};

/// Laurent polynomial in sigma with PolyC coefficients. Zero coefficients are
/// never stored.
class ExpPoly {
 public:
  using Terms = std::map<int, PolyC>;

  ExpPoly() = default;
  ExpPoly(PolyC p);  // NOLINT(google-explicit-constructor)
  ExpPoly(GaussianRational c) : ExpPoly(PolyC(std::move(c))) {}  // NOLINT
  explicit ExpPoly(Terms terms);
  static ExpPoly sigma(int k = 1);
  static ExpPoly z() { return ExpPoly(PolyC::z()); }
  static ExpPoly term(int k, PolyC p);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  PolyC coeff(int k) const;
  /// Lowest and highest sigma exponents; requires nonzero.
  int valuation() const;
  int sigma_degree() const;
  /// sigma_degree - valuation.
  int sigma_span() const { return sigma_degree() - valuation(); }
  int max_abs_exponent() const;
  int z_degree() const;
  bool is_poly_in_z() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
  /// Coefficient polynomial of the highest sigma power.
  const PolyC& leading_coeff() const { return terms_.rbegin()->second; }

  /// Multiplication by sigma^k.
  ExpPoly shifted(int k) const;
  /// Monic gcd of the coefficient polynomials.
  PolyC content() const;
  ExpPoly divided_by(const PolyC& p) const;  // exact; throws otherwise
  ExpPoly scaled(const GaussianRational& c) const;

  ExpPoly operator-() const;
  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ExpPoly& a, const ExpPoly& b) { return !(a == b); }

  /// Exact Taylor coefficients of a*(z) at z = 0 up to (excluding) `order`.
  std::vector<GaussianRational> taylor_at_zero(int order) const;
  /// Vanishing order of a* at 0 (a must be nonzero).
  int order_at_zero() const;

  std::string to_string() const;

 private:
  void normalize();
  Terms terms_;
};

ExpPoly ep_add(const ExpPoly& a, const ExpPoly& b);
ExpPoly ep_mul(const ExpPoly& a, const ExpPoly& b);
/// Returns sum_j (p_j' + j p_j) sigma^j, so that result* = (a*)'.
ExpPoly ep_derivative(const ExpPoly& a);
/// sum_j p_j(z) e^{jz}; throws Overflow when an exponent leaves double range.
Complex ep_eval(const ExpPoly& a, Complex z);
ExpPoly ep_pow(const ExpPoly& a, int n);

/// Laurent polynomial in sigma over Q(i)(z).
class RatExpPoly {
 public:
  using Terms = std::map<int, RatFunc>;

  RatExpPoly() = default;
  explicit RatExpPoly(const ExpPoly& p);
  explicit RatExpPoly(Terms terms);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  RatFunc coeff(int k) const;
  int sigma_degree() const { return terms_.rbegin()->first; }
  int valuation() const { return terms_.begin()->first; }

  friend RatExpPoly operator+(const RatExpPoly& a, const RatExpPoly& b);
  friend RatExpPoly operator-(const RatExpPoly& a, const RatExpPoly& b);
  friend RatExpPoly operator*(const RatExpPoly& a, const RatExpPoly& b);
  friend bool operator==(const RatExpPoly& a, const RatExpPoly& b) { return a.terms_ == b.terms_; }
  RatExpPoly scaled(const RatFunc& c) const;
  RatExpPoly shifted(int k) const;

  /// Writes this as numerator / common_denominator with a monic lcm of the
  /// coefficient denominators.
  std::pair<ExpPoly, PolyC> cleared() const;
  std::string to_string() const;

 private:
  void normalize();
  Terms terms_;
};

struct LaurentDivMod {
  RatExpPoly quotient;
  RatExpPoly remainder;
};

/// Euclidean division in Q(i)(z)[sigma^{+-1}]: a = q*b + r with
/// span(r) < span(b) after shifting both to valuation 0.
LaurentDivMod laurent_divmod(const ExpPoly& a, const ExpPoly& b);

/// Gcd of two exponential polynomials in Q(i)[z, sigma^{+-1}], normalized to
/// valuation 0 with monic leading coefficient polynomial.
ExpPoly ep_gcd(const ExpPoly& a, const ExpPoly& b);

/// Extended Euclid over Q(i)(z)[sigma]: u*a + v*b = l with l in Q(i)[z]
/// (a, b coprime over Q(i)(z) and shifted to valuation 0). u, v polynomial.
struct SigmaXgcd {
  ExpPoly u;
  ExpPoly v;
  PolyC l;
};
SigmaXgcd sigma_xgcd(const ExpPoly& a, const ExpPoly& b);

/// Resultant with respect to sigma of the valuation-0 shifts of a and b.
PolyC sigma_resultant(const ExpPoly& a, const ExpPoly& b);

/// Floating-point copy of an ExpPoly for repeated evaluation.
class CompiledExpPoly {
 public:
  CompiledExpPoly() = default;
  explicit CompiledExpPoly(const ExpPoly& p);
  Complex operator()(Complex z) const;
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<std::pair<int, std::vector<Complex>>> terms_;
};

/// All complex roots of p (with multiplicity), by Durand-Kerner iteration.
std::vector<Complex> numeric_roots(const PolyC& p);

}  // namespace ddelta
