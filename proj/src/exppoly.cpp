#include "ddelta/exppoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddelta {

// ---------------------------------------------------------------------------
// GaussianRational

GaussianRational GaussianRational::from_fraction(long num, long den) {
  if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in rational literal");
  mpq_class q(num, den);
  q.canonicalize();
  return {q, mpq_class(0)};
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  mpq_class n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero scalar");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string GaussianRational::to_string() const {
  auto q = [](const mpq_class& v) { return v.get_str(); };
  if (sgn(im_) == 0) return q(re_);
  std::string imag = im_ == 1 ? "i" : im_ == -1 ? "-i" : q(im_) + "i";
  if (sgn(re_) == 0) return imag;
  std::string sep = sgn(im_) < 0 ? "" : "+";
  return "(" + q(re_) + sep + imag + ")";
}

// ---------------------------------------------------------------------------
// PolyC

PolyC::PolyC(GaussianRational c) {
  if (!c.is_zero()) coeffs_.push_back(std::move(c));
}

PolyC::PolyC(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

PolyC PolyC::monomial(const GaussianRational& c, int degree) {
  if (c.is_zero()) return {};
  std::vector<GaussianRational> v(static_cast<size_t>(degree) + 1);
  v.back() = c;
  return PolyC(std::move(v));
}

PolyC PolyC::from_ints(std::initializer_list<long> coeffs) {
  std::vector<GaussianRational> v;
  for (long c : coeffs) v.emplace_back(c);
  return PolyC(std::move(v));
}

void PolyC::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

GaussianRational PolyC::operator[](int k) const {
  if (k < 0 || k > degree()) return {};
  return coeffs_[static_cast<size_t>(k)];
}

PolyC PolyC::monic() const {
  if (is_zero() || leading().is_one()) return *this;
  GaussianRational inv = leading().inverse();
  PolyC out = *this;
  for (auto& c : out.coeffs_) c *= inv;
  return out;
}

PolyC PolyC::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<GaussianRational> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * GaussianRational(static_cast<long>(k));
  return PolyC(std::move(d));
}

PolyC PolyC::shifted(const GaussianRational& c) const {
  // Horner in (z + c).
  PolyC out;
  PolyC lin({c, GaussianRational(1)});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    out = out * lin;
    out += PolyC(*it);
  }
  return out;
}

int PolyC::valuation() const {
  for (size_t k = 0; k < coeffs_.size(); ++k)
    if (!coeffs_[k].is_zero()) return static_cast<int>(k);
  return -1;
}

bool PolyC::is_real() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) { return c.is_real(); });
}

GaussianRational PolyC::eval(const GaussianRational& x) const {
  GaussianRational acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Complex PolyC::eval(Complex x) const {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->to_complex();
  return acc;
}

PolyC PolyC::operator-() const {
  PolyC out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

PolyC& PolyC::operator+=(const PolyC& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

PolyC& PolyC::operator-=(const PolyC& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

PolyC operator*(const PolyC& a, const PolyC& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussianRational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return PolyC(std::move(out));
}

PolyC& PolyC::operator*=(const PolyC& o) { return *this = *this * o; }

PolyC& PolyC::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

bool operator<(const PolyC& a, const PolyC& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int k = a.degree(); k >= 0; --k) {
    const auto& x = a.coeffs_[static_cast<size_t>(k)];
    const auto& y = b.coeffs_[static_cast<size_t>(k)];
    if (x != y) return x < y;
  }
  return false;
}

std::string PolyC::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const auto& c = coeffs_[static_cast<size_t>(k)];
    if (c.is_zero()) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    bool negative_real = c.is_real() && sgn(c.re()) < 0;
    GaussianRational mag = negative_real ? -c : c;
    if (first) {
      if (negative_real) os << "-";
    } else {
      os << (negative_real ? " - " : " + ");
    }
    first = false;
    if (mono.empty()) {
      os << mag.to_string();
    } else if (mag.is_one()) {
      os << mono;
    } else {
      os << mag.to_string() << "*" << mono;
    }
  }
  return os.str();
}

PolyDivMod poly_divmod(const PolyC& a, const PolyC& b) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  if (a.degree() < b.degree()) return {PolyC(), a};
  std::vector<GaussianRational> r = a.coeffs();
  std::vector<GaussianRational> q(static_cast<size_t>(a.degree() - b.degree()) + 1);
  GaussianRational inv = b.leading().inverse();
  const auto& bc = b.coeffs();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    GaussianRational t = r[static_cast<size_t>(k + b.degree())] * inv;
    if (t.is_zero()) continue;
    q[static_cast<size_t>(k)] = t;
    for (int j = 0; j <= b.degree(); ++j) r[static_cast<size_t>(k + j)] -= t * bc[static_cast<size_t>(j)];
  }
  r.resize(static_cast<size_t>(b.degree()));
  return {PolyC(std::move(q)), PolyC(std::move(r))};
}

bool poly_divides(const PolyC& d, const PolyC& a) {
  if (d.is_zero()) return a.is_zero();
  return poly_divmod(a, d).remainder.is_zero();
}

PolyC poly_exact_div(const PolyC& a, const PolyC& b) {
  auto [q, r] = poly_divmod(a, b);
  if (!r.is_zero()) throw Error(ErrorKind::DivisionByZero, "inexact polynomial division");
  return q;
}

PolyC poly_gcd(const PolyC& a, const PolyC& b) {
  PolyC x = a.monic();
  PolyC y = b.monic();
  while (!y.is_zero()) {
    PolyC r = poly_divmod(x, y).remainder.monic();
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

PolyC poly_lcm(const PolyC& a, const PolyC& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return poly_exact_div(a * b, poly_gcd(a, b)).monic();
}

PolyC poly_pow(const PolyC& p, int n) {
  PolyC out(GaussianRational(1));
  for (int k = 0; k < n; ++k) out *= p;
  return out;
}

std::vector<std::pair<PolyC, int>> squarefree_decomposition(const PolyC& p) {
  std::vector<std::pair<PolyC, int>> out;
  if (p.degree() < 1) return out;
  PolyC f = p.monic();
  PolyC a = poly_gcd(f, f.derivative());
  PolyC b = poly_exact_div(f, a);
  PolyC c = poly_exact_div(f.derivative(), a);
  PolyC d = c - b.derivative();
  int i = 1;
  while (b.degree() >= 1) {
    PolyC g = poly_gcd(b, d);
    if (g.degree() >= 1) out.emplace_back(g, i);
    b = poly_exact_div(b, g);
    c = poly_exact_div(d, g);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

PolyC squarefree_part(const PolyC& p) {
  if (p.degree() < 1) return PolyC(GaussianRational(1));
  return poly_exact_div(p.monic(), poly_gcd(p, p.derivative()));
}

PolyXgcd poly_xgcd(const PolyC& a, const PolyC& b) {
  PolyC r0 = a, r1 = b;
  PolyC s0(GaussianRational(1)), s1;
  PolyC t0, t1(GaussianRational(1));
  while (!r1.is_zero()) {
    auto [q, r] = poly_divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    PolyC s2 = s0 - q * s1;
    PolyC t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {PolyC(), PolyC(), PolyC()};
  GaussianRational inv = r0.leading().inverse();
  return {r0 * inv, s0 * inv, t0 * inv};
}

// ---------------------------------------------------------------------------
// RatFunc

RatFunc::RatFunc(PolyC num) : num_(std::move(num)), den_(GaussianRational(1)) {}

RatFunc::RatFunc(PolyC num, PolyC den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = PolyC(GaussianRational(1));
    return;
  }
  PolyC g = poly_gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = poly_exact_div(num_, g);
    den_ = poly_exact_div(den_, g);
  }
  if (!den_.leading().is_one()) {
    GaussianRational inv = den_.leading().inverse();
    num_ *= inv;
    den_ *= inv;
  }
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero rational function");
  return {den_, num_};
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// ---------------------------------------------------------------------------
// ExpPoly

ExpPoly::ExpPoly(PolyC p) {
  if (!p.is_zero()) terms_.emplace(0, std::move(p));
}

ExpPoly::ExpPoly(Terms terms) : terms_(std::move(terms)) { normalize(); }

ExpPoly ExpPoly::sigma(int k) { return term(k, PolyC(GaussianRational(1))); }

ExpPoly ExpPoly::term(int k, PolyC p) {
  ExpPoly out;
  if (!p.is_zero()) out.terms_.emplace(k, std::move(p));
  return out;
}

void ExpPoly::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero())
      it = terms_.erase(it);
    else
      ++it;
  }
}

PolyC ExpPoly::coeff(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? PolyC() : it->second;
}

int ExpPoly::valuation() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "valuation of zero exponential polynomial");
  return terms_.begin()->first;
}

int ExpPoly::sigma_degree() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "degree of zero exponential polynomial");
  return terms_.rbegin()->first;
}

int ExpPoly::max_abs_exponent() const {
  int m = 0;
  for (const auto& [k, p] : terms_) m = std::max(m, std::abs(k));
  return m;
}

int ExpPoly::z_degree() const {
  int d = -1;
  for (const auto& [k, p] : terms_) d = std::max(d, p.degree());
  return d;
}

ExpPoly ExpPoly::shifted(int k) const {
  if (k == 0) return *this;
  ExpPoly out;
  for (const auto& [j, p] : terms_) out.terms_.emplace(j + k, p);
  return out;
}

PolyC ExpPoly::content() const {
  PolyC g;
  for (const auto& [k, p] : terms_) {
    g = poly_gcd(g, p);
    if (g.degree() == 0) break;
  }
  return g;
}

ExpPoly ExpPoly::divided_by(const PolyC& p) const {
  ExpPoly out;
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, poly_exact_div(c, p));
  return out;
}

ExpPoly ExpPoly::scaled(const GaussianRational& c) const {
  if (c.is_zero()) return {};
  ExpPoly out = *this;
  for (auto& [k, p] : out.terms_) p *= c;
  return out;
}

ExpPoly ExpPoly::operator-() const { return scaled(GaussianRational(-1)); }

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (const auto& [k, p] : o.terms_) {
    auto [it, inserted] = terms_.emplace(k, p);
    if (!inserted) {
      it->second += p;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) { return *this += -o; }

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly out;
  for (const auto& [i, p] : a.terms_)
    for (const auto& [j, q] : b.terms_) out += ExpPoly::term(i + j, p * q);
  return out;
}

namespace {

// n-th Taylor coefficient of a* at 0: sum_j sum_a p_{j,a} j^{n-a}/(n-a)!.
GaussianRational taylor_coefficient(const ExpPoly::Terms& terms, int n) {
  GaussianRational acc;
  for (const auto& [j, p] : terms) {
    for (int a = 0; a <= std::min(n, p.degree()); ++a) {
      const GaussianRational c = p[a];
      if (c.is_zero()) continue;
      int b = n - a;
      mpz_class jb, fact;
      mpz_pow_ui(jb.get_mpz_t(), mpz_class(j).get_mpz_t(), static_cast<unsigned long>(b));
      mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(b));
      mpq_class w(jb, fact);
      w.canonicalize();
      acc += c * GaussianRational(w, mpq_class(0));
    }
  }
  return acc;
}

}  // namespace

std::vector<GaussianRational> ExpPoly::taylor_at_zero(int order) const {
  std::vector<GaussianRational> out;
  out.reserve(static_cast<size_t>(std::max(order, 0)));
  for (int n = 0; n < order; ++n) out.push_back(taylor_coefficient(terms_, n));
  return out;
}

int ExpPoly::order_at_zero() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "order of the zero function");
  for (int n = 0;; ++n)
    if (!taylor_coefficient(terms_, n).is_zero()) return n;
}

std::string ExpPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [k, p] = *it;
    std::string poly = p.to_string();
    bool single = p.coeffs().size() - static_cast<size_t>(std::max(p.valuation(), 0)) == 1;
    std::string s;
    if (k == 0) {
      s = poly;
    } else {
      std::string sig = k == 1 ? "s" : "s^" + std::to_string(k);
      if (p.is_one())
        s = sig;
      else if (p == PolyC(GaussianRational(-1)))
        s = "-" + sig;
      else if (single)
        s = poly + "*" + sig;
      else
        s = "(" + poly + ")*" + sig;
    }
    if (!first) {
      if (s.rfind('-', 0) == 0)
        os << " - " << s.substr(1);
      else
        os << " + " << s;
    } else {
      os << s;
    }
    first = false;
  }
  return os.str();
}

ExpPoly ep_add(const ExpPoly& a, const ExpPoly& b) { return a + b; }
ExpPoly ep_mul(const ExpPoly& a, const ExpPoly& b) { return a * b; }

ExpPoly ep_derivative(const ExpPoly& a) {
  ExpPoly out;
  for (const auto& [j, p] : a.terms()) out += ExpPoly::term(j, p.derivative() + p * GaussianRational(j));
  return out;
}

Complex ep_eval(const ExpPoly& a, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorKind::Overflow, "non-finite evaluation point");
  Complex acc{0.0, 0.0};
  for (const auto& [j, p] : a.terms()) {
    double re = static_cast<double>(j) * z.real();
    if (re > 709.0) throw Error(ErrorKind::Overflow, "exponential overflow in ep_eval");
    acc += p.eval(z) * std::exp(static_cast<double>(j) * z);
  }
  return acc;
}

ExpPoly ep_pow(const ExpPoly& a, int n) {
  ExpPoly out(GaussianRational(1));
  for (int k = 0; k < n; ++k) out = out * a;
  return out;
}

// ---------------------------------------------------------------------------
// RatExpPoly and Euclidean structure

RatExpPoly::RatExpPoly(const ExpPoly& p) {
  for (const auto& [k, c] : p.terms()) terms_.emplace(k, RatFunc(c));
}

RatExpPoly::RatExpPoly(Terms terms) : terms_(std::move(terms)) { normalize(); }

void RatExpPoly::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero())
      it = terms_.erase(it);
    else
      ++it;
  }
}

RatFunc RatExpPoly::coeff(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? RatFunc() : it->second;
}

RatExpPoly operator+(const RatExpPoly& a, const RatExpPoly& b) {
  RatExpPoly::Terms t = a.terms_;
  for (const auto& [k, c] : b.terms_) {
    auto [it, inserted] = t.emplace(k, c);
    if (!inserted) it->second = it->second + c;
  }
  return RatExpPoly(std::move(t));
}

RatExpPoly operator-(const RatExpPoly& a, const RatExpPoly& b) {
  return a + b.scaled(RatFunc(PolyC(GaussianRational(-1))));
}

RatExpPoly operator*(const RatExpPoly& a, const RatExpPoly& b) {
  RatExpPoly::Terms t;
  for (const auto& [i, p] : a.terms_)
    for (const auto& [j, q] : b.terms_) {
      auto [it, inserted] = t.emplace(i + j, p * q);
      if (!inserted) it->second = it->second + p * q;
    }
  return RatExpPoly(std::move(t));
}

RatExpPoly RatExpPoly::scaled(const RatFunc& c) const {
  Terms t;
  if (c.is_zero()) return {};
  for (const auto& [k, p] : terms_) t.emplace(k, p * c);
  return RatExpPoly(std::move(t));
}

RatExpPoly RatExpPoly::shifted(int k) const {
  Terms t;
  for (const auto& [j, p] : terms_) t.emplace(j + k, p);
  return RatExpPoly(std::move(t));
}

std::pair<ExpPoly, PolyC> RatExpPoly::cleared() const {
  PolyC l(GaussianRational(1));
  for (const auto& [k, c] : terms_) l = poly_lcm(l, c.den());
  ExpPoly::Terms out;
  for (const auto& [k, c] : terms_) out.emplace(k, c.num() * poly_exact_div(l, c.den()));
  return {ExpPoly(std::move(out)), l};
}

std::string RatExpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << it->second.to_string() << ")";
    if (it->first != 0) os << "*s^" << it->first;
  }
  return os.str();
}

namespace {

// Division of polynomials in sigma (nonnegative exponents) over Q(i)(z).
std::pair<RatExpPoly, RatExpPoly> sigma_poly_divmod(const RatExpPoly& a, const RatExpPoly& b) {
  RatExpPoly q;
  RatExpPoly r = a;
  const int db = b.sigma_degree();
  const RatFunc lead_inv = b.terms().rbegin()->second.inverse();
  while (!r.is_zero() && r.sigma_degree() >= db) {
    int k = r.sigma_degree() - db;
    RatFunc t = r.terms().rbegin()->second * lead_inv;
    RatExpPoly mono(RatExpPoly::Terms{{k, t}});
    q = q + mono;
    r = r - mono * b;
  }
  return {q, r};
}

ExpPoly to_valuation_zero(const ExpPoly& p) { return p.is_zero() ? p : p.shifted(-p.valuation()); }

// Primitive, valuation-0, monic-leading representative of a nonzero ExpPoly.
ExpPoly primitive_normal(const ExpPoly& p) {
  ExpPoly q = to_valuation_zero(p).divided_by(p.content());
  return q.scaled(q.leading_coeff().leading().inverse());
}

}  // namespace

LaurentDivMod laurent_divmod(const ExpPoly& a, const ExpPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "laurent_divmod by zero");
  if (a.is_zero()) return {};
  const int va = std::min(a.valuation(), 0);
  const int vb = b.valuation();
  auto [q, r] = sigma_poly_divmod(RatExpPoly(a.shifted(-va)), RatExpPoly(b.shifted(-vb)));
  return {q.shifted(va - vb), r.shifted(va)};
}

ExpPoly ep_gcd(const ExpPoly& a, const ExpPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero()) return primitive_normal(b) * ExpPoly(b.content());
  if (b.is_zero()) return primitive_normal(a) * ExpPoly(a.content());
  PolyC content = poly_gcd(a.content(), b.content());
  RatExpPoly r0(primitive_normal(a));
  RatExpPoly r1(primitive_normal(b));
  while (!r1.is_zero()) {
    RatExpPoly r2 = sigma_poly_divmod(r0, r1).second;
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  ExpPoly g = primitive_normal(r0.cleared().first);
  return g * ExpPoly(content);
}

SigmaXgcd sigma_xgcd(const ExpPoly& a, const ExpPoly& b) {
  const int va = a.valuation();
  const int vb = b.valuation();
  RatExpPoly r0(a.shifted(-va)), r1(b.shifted(-vb));
  RatExpPoly s0(ExpPoly(GaussianRational(1))), s1;
  RatExpPoly t0, t1(ExpPoly(GaussianRational(1)));
  while (!r1.is_zero()) {
    auto [q, r] = sigma_poly_divmod(r0, r1);
    RatExpPoly s2 = s0 - q * s1;
    RatExpPoly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.sigma_degree() != 0 || r0.valuation() != 0)
    throw Error(ErrorKind::BothZero, "sigma_xgcd: arguments are not coprime over Q(i)(z)");
  RatFunc inv = r0.coeff(0).inverse();
  RatExpPoly u = s0.scaled(inv);
  RatExpPoly v = t0.scaled(inv);
  // Common denominator L with u*a0 + v*b0 = 1  =>  (L u) a0 + (L v) b0 = L.
  auto [un, ud] = u.cleared();
  auto [vn, vd] = v.cleared();
  PolyC l = poly_lcm(ud, vd);
  ExpPoly U = un * ExpPoly(poly_exact_div(l, ud));
  ExpPoly V = vn * ExpPoly(poly_exact_div(l, vd));
  PolyC g = poly_gcd(poly_gcd(U.content(), V.content()), l);
  if (g.degree() > 0) {
    U = U.divided_by(g);
    V = V.divided_by(g);
    l = poly_exact_div(l, g);
  }
  GaussianRational lc_inv = l.leading().inverse();
  return {U.scaled(lc_inv).shifted(-va), V.scaled(lc_inv).shifted(-vb), l * lc_inv};
}

PolyC sigma_resultant(const ExpPoly& a, const ExpPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  ExpPoly a0 = to_valuation_zero(a);
  ExpPoly b0 = to_valuation_zero(b);
  const int m = a0.sigma_degree();
  const int n = b0.sigma_degree();
  if (m == 0 && n == 0) return PolyC(GaussianRational(1));
  if (m == 0) return poly_pow(a0.coeff(0), n);
  if (n == 0) return poly_pow(b0.coeff(0), m);
  const int size = m + n;
  std::vector<std::vector<PolyC>> mat(static_cast<size_t>(size), std::vector<PolyC>(static_cast<size_t>(size)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) mat[static_cast<size_t>(r)][static_cast<size_t>(r + k)] = a0.coeff(m - k);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) mat[static_cast<size_t>(n + r)][static_cast<size_t>(r + k)] = b0.coeff(n - k);
  // Fraction-free Bareiss elimination over Q(i)[z].
  PolyC prev(GaussianRational(1));
  bool negate = false;
  for (int k = 0; k < size - 1; ++k) {
    auto K = static_cast<size_t>(k);
    if (mat[K][K].is_zero()) {
      size_t p = K + 1;
      while (p < static_cast<size_t>(size) && mat[p][K].is_zero()) ++p;
      if (p == static_cast<size_t>(size)) return {};
      std::swap(mat[K], mat[p]);
      negate = !negate;
    }
    for (size_t i = K + 1; i < static_cast<size_t>(size); ++i) {
      for (size_t j = K + 1; j < static_cast<size_t>(size); ++j)
        mat[i][j] = poly_exact_div(mat[K][K] * mat[i][j] - mat[i][K] * mat[K][j], prev);
      mat[i][K] = PolyC();
    }
    prev = mat[K][K];
  }
  PolyC det = mat.back().back();
  return negate ? -det : det;
}

}  // namespace ddelta

namespace ddelta {

CompiledExpPoly::CompiledExpPoly(const ExpPoly& p) {
  for (const auto& [j, c] : p.terms()) {
    std::vector<Complex> cs;
    cs.reserve(c.coeffs().size());
    for (const auto& x : c.coeffs()) cs.push_back(x.to_complex());
    terms_.emplace_back(j, std::move(cs));
  }
}

Complex CompiledExpPoly::operator()(Complex z) const {
  Complex acc{0.0, 0.0};
  for (const auto& [j, cs] : terms_) {
    Complex p{0.0, 0.0};
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) p = p * z + *it;
    if (j == 0) {
      acc += p;
    } else {
      double re = static_cast<double>(j) * z.real();
      if (re > 709.0) throw Error(ErrorKind::Overflow, "exponential overflow in evaluation");
      acc += p * std::exp(static_cast<double>(j) * z);
    }
  }
  return acc;
}

std::vector<Complex> numeric_roots(const PolyC& p) {
  const int n = p.degree();
  if (n < 1) return {};
  std::vector<Complex> c(static_cast<size_t>(n) + 1);
  Complex lead = p.leading().to_complex();
  for (int k = 0; k <= n; ++k) c[static_cast<size_t>(k)] = p[k].to_complex() / lead;
  auto eval = [&](Complex x) {
    Complex acc{0.0, 0.0};
    for (int k = n; k >= 0; --k) acc = acc * x + c[static_cast<size_t>(k)];
    return acc;
  };
  double radius = 0.0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::pow(std::abs(c[static_cast<size_t>(k)]), 1.0 / (n - k)));
  radius = std::max(radius, 1e-3);
  std::vector<Complex> x(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) x[static_cast<size_t>(k)] = radius * std::polar(1.0, 2.0 * M_PI * (k + 0.25) / n);
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      Complex denom{1.0, 0.0};
      for (size_t j = 0; j < x.size(); ++j)
        if (j != i) denom *= (x[i] - x[j]);
      if (std::abs(denom) == 0.0) denom = 1e-300;
      Complex step = eval(x[i]) / denom;
      x[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * std::max(1.0, radius)) break;
  }
  std::sort(x.begin(), x.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return x;
}

}  // namespace ddelta
