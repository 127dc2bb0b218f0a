#include "ddelta/hefer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddelta {

// ---------------------------------------------------------------------------
// MPoly

MPoly::MPoly(GaussianRational c) {
  if (!c.is_zero()) terms_[Exponent{}] = std::move(c);
}

MPoly MPoly::var(Var v, int power) {
  MPoly m;
  Exponent e{};
  e[static_cast<size_t>(v)] = power;
  m.terms_[e] = GaussianRational(1);
  return m;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  MPoly r = a;
  for (const auto& [e, c] : b.terms_) {
    auto& slot = r.terms_[e];
    slot += c;
    if (slot.is_zero()) r.terms_.erase(e);
  }
  return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + b * MPoly(GaussianRational(-1)); }

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      MPoly::Exponent e;
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto& slot = r.terms_[e];
      slot += ca * cb;
      if (slot.is_zero()) r.terms_.erase(e);
    }
  return r;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  static const char* names[] = {"zeta1", "z1", "exp(zeta1)", "exp(z1)", "zeta2", "z2"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    os << (first ? "" : " + ") << "(" << c.to_string() << ")";
    first = false;
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) os << "*" << names[i] << (e[i] != 1 ? "^" + std::to_string(e[i]) : "");
  }
  return os.str();
}

namespace {

// q*(v) with v = zeta1 or z1: numerator and denominator.
std::pair<MPoly, MPoly> embed(const HElement& q, bool at_zeta) {
  const auto v = at_zeta ? MPoly::Zeta1 : MPoly::Z1;
  const auto e = at_zeta ? MPoly::EZeta1 : MPoly::EZ1;
  MPoly num, den;
  const ExpPoly f = q.full_numerator();
  for (const auto& [j, p] : f.terms())
    for (int k = 0; k <= p.degree(); ++k)
      if (!p[k].is_zero()) num = num + MPoly(p[k]) * MPoly::var(v, k) * MPoly::var(e, j);
  for (int k = 0; k <= q.den().degree(); ++k)
    if (!q.den()[k].is_zero()) den = den + MPoly(q.den()[k]) * MPoly::var(v, k);
  return {num, den};
}

bool is_constant(const HElement& q) { return q.is_unit() && q.unit().k == 0; }

// q minus its constant term when that is well defined.
HElement strip_constant(const HElement& q) {
  if (q.den().degree() != 0) return q;
  ExpPoly f = q.full_numerator();
  GaussianRational c0 = f.coeff(0)[0];
  if (c0.is_zero()) return q;
  return h_normalize(f - ExpPoly(c0), q.den());
}

std::string key(const TwoVarExpPoly::Term& t) {
  std::string k;
  for (const auto& q : t.at_zeta) k += "a" + q.to_string() + "|";
  for (const auto& q : t.at_z) k += "b" + q.to_string() + "|";
  for (const auto& q : t.quotients) k += "d" + q.to_string() + "|";
  return k + std::to_string(t.zeta2) + "," + std::to_string(t.z2);
}

void sort_factors(std::vector<HElement>& v) {
  std::sort(v.begin(), v.end(), [](const HElement& a, const HElement& b) { return a.to_string() < b.to_string(); });
}

}  // namespace

// ---------------------------------------------------------------------------
// TwoVarExpPoly

TwoVarExpPoly TwoVarExpPoly::constant(const GaussianRational& c) {
  TwoVarExpPoly p;
  p.terms_.push_back(Term{c, {}, {}, {}, 0, 0});
  p.normalize();
  return p;
}

TwoVarExpPoly TwoVarExpPoly::at_zeta(const HElement& q) {
  TwoVarExpPoly p;
  p.terms_.push_back(Term{GaussianRational(1), {q}, {}, {}, 0, 0});
  p.normalize();
  return p;
}

TwoVarExpPoly TwoVarExpPoly::at_z(const HElement& q) {
  TwoVarExpPoly p;
  p.terms_.push_back(Term{GaussianRational(1), {}, {q}, {}, 0, 0});
  p.normalize();
  return p;
}

TwoVarExpPoly TwoVarExpPoly::quotient_atom(const HElement& q) {
  TwoVarExpPoly p;
  if (q.is_zero() || is_constant(q)) return p;
  p.terms_.push_back(Term{GaussianRational(1), {}, {}, {strip_constant(q)}, 0, 0});
  return p;
}

TwoVarExpPoly TwoVarExpPoly::monomial2(int zeta2_power, int z2_power) {
  if (zeta2_power < 0 || z2_power < 0) throw Error(ErrorKind::Usage, "negative monomial power");
  TwoVarExpPoly p;
  p.terms_.push_back(Term{GaussianRational(1), {}, {}, {}, zeta2_power, z2_power});
  return p;
}

void TwoVarExpPoly::normalize() {
  std::vector<Term> out;
  std::map<std::string, size_t> index;
  for (auto& t : terms_) {
    bool zero = t.coeff.is_zero();
    auto fold = [&](std::vector<HElement>& v) {
      std::vector<HElement> kept;
      for (auto& q : v) {
        if (q.is_zero()) zero = true;
        else if (is_constant(q)) t.coeff *= q.unit().c;
        else kept.push_back(q);
      }
      v = std::move(kept);
      sort_factors(v);
    };
    fold(t.at_zeta);
    fold(t.at_z);
    sort_factors(t.quotients);
    if (zero || t.coeff.is_zero()) continue;
    const std::string k = key(t);
    auto it = index.find(k);
    if (it == index.end()) {
      index[k] = out.size();
      out.push_back(std::move(t));
    } else {
      out[it->second].coeff += t.coeff;
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coeff.is_zero(); }), out.end());
  terms_ = std::move(out);
}

TwoVarExpPoly operator+(const TwoVarExpPoly& a, const TwoVarExpPoly& b) {
  TwoVarExpPoly r = a;
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  r.normalize();
  return r;
}

TwoVarExpPoly TwoVarExpPoly::operator-() const {
  TwoVarExpPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

TwoVarExpPoly operator-(const TwoVarExpPoly& a, const TwoVarExpPoly& b) { return a + (-b); }

TwoVarExpPoly operator*(const TwoVarExpPoly& a, const TwoVarExpPoly& b) {
  TwoVarExpPoly r;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      TwoVarExpPoly::Term t = x;
      t.coeff *= y.coeff;
      t.at_zeta.insert(t.at_zeta.end(), y.at_zeta.begin(), y.at_zeta.end());
      t.at_z.insert(t.at_z.end(), y.at_z.begin(), y.at_z.end());
      t.quotients.insert(t.quotients.end(), y.quotients.begin(), y.quotients.end());
      t.zeta2 += y.zeta2;
      t.z2 += y.z2;
      r.terms_.push_back(std::move(t));
    }
  r.normalize();
  return r;
}

std::pair<MPoly, MPoly> TwoVarExpPoly::to_fraction() const {
  MPoly num, den(GaussianRational(1));
  const MPoly diff = MPoly::var(MPoly::Zeta1) - MPoly::var(MPoly::Z1);
  for (const auto& t : terms_) {
    MPoly n = MPoly(t.coeff) * MPoly::var(MPoly::Zeta2, t.zeta2) * MPoly::var(MPoly::Z2, t.z2);
    MPoly d(GaussianRational(1));
    for (const auto& q : t.at_zeta) {
      auto [a, b] = embed(q, true);
      n = n * a;
      d = d * b;
    }
    for (const auto& q : t.at_z) {
      auto [a, b] = embed(q, false);
      n = n * a;
      d = d * b;
    }
    for (const auto& q : t.quotients) {
      auto [fz, pz] = embed(q, true);
      auto [fw, pw] = embed(q, false);
      n = n * (fz * pw - fw * pz);
      d = d * diff * pz * pw;
    }
    if (d == den) {
      num = num + n;
    } else {
      num = num * d + n * den;
      den = den * d;
    }
  }
  return {num, den};
}

bool TwoVarExpPoly::equals(const TwoVarExpPoly& o) const { return (*this - o).to_fraction().first.is_zero(); }

Complex TwoVarExpPoly::eval(Complex zeta1, Complex z1, Complex zeta2, Complex z2) const {
  Complex acc{0, 0};
  for (const auto& t : terms_) {
    Complex v = t.coeff.to_complex() * std::pow(zeta2, t.zeta2) * std::pow(z2, t.z2);
    for (const auto& q : t.at_zeta) v *= q.eval(zeta1);
    for (const auto& q : t.at_z) v *= q.eval(z1);
    for (const auto& q : t.quotients) {
      if (std::abs(zeta1 - z1) < 1e-8)
        v *= q.eval_derivative(0.5 * (zeta1 + z1));
      else
        v *= (q.eval(zeta1) - q.eval(z1)) / (zeta1 - z1);
    }
    acc += v;
  }
  return acc;
}

std::string TwoVarExpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    os << (first ? "" : " + ");
    first = false;
    std::vector<std::string> f;
    if (!t.coeff.is_one()) f.push_back("(" + t.coeff.to_string() + ")");
    for (const auto& q : t.at_zeta) f.push_back("(" + q.to_string() + ")(zeta1)");
    for (const auto& q : t.at_z) f.push_back("(" + q.to_string() + ")(z1)");
    for (const auto& q : t.quotients) f.push_back("dq[" + q.to_string() + "](zeta1, z1)");
    if (t.zeta2) f.push_back(t.zeta2 == 1 ? "zeta2" : "zeta2^" + std::to_string(t.zeta2));
    if (t.z2) f.push_back(t.z2 == 1 ? "z2" : "z2^" + std::to_string(t.z2));
    if (f.empty()) f.push_back("1");
    for (size_t i = 0; i < f.size(); ++i) os << (i ? "*" : "") << f[i];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Hefer forms

TwoVarExpPoly hefer_quotient(const HElement& q) {
  if (q.is_zero()) throw Error(ErrorKind::DivisionByZero, "Hefer quotient of the zero element");
  if (q.den().degree() != 0) return TwoVarExpPoly::quotient_atom(q);
  const ExpPoly f = q.full_numerator();
  const PolyC p = f.coeff(0);
  TwoVarExpPoly out;
  // (p(zeta) - p(z)) / (zeta - z) = sum_k c_k sum_{a+b=k-1} zeta^a z^b.
  for (int k = 1; k <= p.degree(); ++k)
    for (int a = 0; a < k; ++a) {
      HElement za(ExpPoly(PolyC::monomial(GaussianRational(1), a)));
      HElement zb(ExpPoly(PolyC::monomial(GaussianRational(1), k - 1 - a)));
      out = out + TwoVarExpPoly::constant(p[k]) * TwoVarExpPoly::at_zeta(za) * TwoVarExpPoly::at_z(zb);
    }
  const ExpPoly rest = f - ExpPoly(p);
  if (!rest.is_zero()) out = out + TwoVarExpPoly::quotient_atom(HElement(rest));
  return out;
}

HeferPair hefer_pair_n2(const HElement& q, int alpha) {
  if (alpha < 0) throw Error(ErrorKind::Usage, "alpha must be non-negative");
  HeferPair hp;
  hp.h1 = q.is_zero() ? TwoVarExpPoly() : hefer_quotient(q) * TwoVarExpPoly::monomial2(0, alpha);
  TwoVarExpPoly sum;
  for (int k = 1; k <= alpha; ++k) sum = sum + TwoVarExpPoly::monomial2(alpha - k, k - 1);
  hp.h2 = TwoVarExpPoly::at_zeta(q) * sum;
  const TwoVarExpPoly d1 = TwoVarExpPoly::at_zeta(HElement(ExpPoly::z())) - TwoVarExpPoly::at_z(HElement(ExpPoly::z()));
  const TwoVarExpPoly d2 = TwoVarExpPoly::monomial2(1, 0) - TwoVarExpPoly::monomial2(0, 1);
  const TwoVarExpPoly lhs = hp.h1 * d1 + hp.h2 * d2;
  const TwoVarExpPoly rhs =
      TwoVarExpPoly::at_zeta(q) * TwoVarExpPoly::monomial2(alpha, 0) - TwoVarExpPoly::at_z(q) * TwoVarExpPoly::monomial2(0, alpha);
  auto [ln, ld] = lhs.to_fraction();
  auto [rn, rd] = rhs.to_fraction();
  const MPoly residual = ln * rd - rn * ld;
  hp.identity_ok = residual.is_zero();
  std::ostringstream os;
  os << "h1 = " << hp.h1.to_string() << "\n"
     << "h2 = " << hp.h2.to_string() << "\n"
     << "h1*(zeta1 - z1) + h2*(zeta2 - z2) = " << lhs.to_string() << "\n"
     << "q(zeta1)*zeta2^" << alpha << " - q(z1)*z2^" << alpha << " = " << rhs.to_string() << "\n"
     << "cross-multiplied difference = " << residual.to_string() << "\n";
  hp.transcript = os.str();
  return hp;
}

namespace {

double log_envelope(Complex z, int m, int n) { return m * std::log1p(std::abs(z)) + n * std::abs(z.real()); }

double max_log_ratio(const HElement& q, double r, int pts, int m, int n) {
  double best = -INFINITY;
  for (int i = 0; i < pts; ++i)
    for (int j = 0; j < pts; ++j) {
      Complex z(-r + 2 * r * i / (pts - 1), -r + 2 * r * j / (pts - 1));
      double v = std::abs(q.eval(z));
      if (v > 0) best = std::max(best, std::log(v) - log_envelope(z, m, n));
    }
  return best;
}

}  // namespace

GrowthBounds growth_bounds(const HElement& q) {
  if (q.is_zero()) throw Error(ErrorKind::DivisionByZero, "growth bounds of the zero element");
  const ExpPoly f = q.full_numerator();
  GrowthBounds g;
  g.N = std::max(std::abs(f.valuation()), std::abs(f.sigma_degree()));
  g.M = std::max(0, f.z_degree() - q.den().degree());
  // Fitted on one grid, confirmed on a grid twice as large.
  const double inner = max_log_ratio(q, 10, 41, g.M, g.N);
  const double outer = max_log_ratio(q, 20, 81, g.M, g.N);
  if (outer > inner + std::log(2.0))
    throw Error(ErrorKind::EnvelopeViolation, "internal: growth envelope (M=" + std::to_string(g.M) +
                                                  ", N=" + std::to_string(g.N) + ") does not dominate q*");
  g.C = std::exp(std::max(inner, outer));
  return g;
}

HeferGrowthReport hefer_growth_check(const HElement& q, double r, int n) {
  if (n < 2 || !(r > 0)) throw Error(ErrorKind::Usage, "growth check needs r > 0 and n >= 2");
  const GrowthBounds gb = growth_bounds(q);
  const ExpPoly f = q.full_numerator();
  const bool polynomial = q.den().degree() == 0 && f.sigma_span() == 0 && f.valuation() == 0;
  HeferGrowthReport rep;
  rep.N = gb.N;
  rep.M = polynomial ? std::max(0, gb.M - 1) : gb.M;
  const TwoVarExpPoly p = hefer_quotient(q);
  std::vector<Complex> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pts.emplace_back(-r + 2 * r * i / (n - 1), -r + 2 * r * j / (n - 1));
  double inner = -INFINITY, all = -INFINITY;
  auto in_half = [r](Complex z) { return std::max(std::abs(z.real()), std::abs(z.imag())) <= 0.5 * r + 1e-12; };
  for (Complex zeta : pts)
    for (Complex z : pts) {
      double v = std::abs(p.eval(zeta, z));
      ++rep.samples;
      if (!(v > 0)) continue;
      double x = std::log(v) - log_envelope(zeta, rep.M, rep.N) - log_envelope(z, rep.M, rep.N);
      all = std::max(all, x);
      if (in_half(zeta) && in_half(z)) inner = std::max(inner, x);
    }
  if (!std::isfinite(all)) {
    rep.dominated = true;
    return rep;
  }
  rep.C = std::exp(all);
  rep.outer_ratio = std::exp(all - inner);
  rep.dominated = rep.outer_ratio <= 2.0;
  if (!rep.dominated)
    throw Error(ErrorKind::EnvelopeViolation, "Hefer quotient exceeds the growth envelope by a factor " +
                                                  std::to_string(rep.outer_ratio) + " outside the fitting region");
  return rep;
}

}  // namespace ddelta
