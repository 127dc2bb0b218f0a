#include "ddelta/hring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddelta {

namespace {

const PolyC kZ = PolyC::z();
const PolyC kOne = PolyC(GaussianRational(1));

int order_of_z(const PolyC& p) { return p.is_zero() ? 0 : p.valuation(); }

// Strips the factor z from a squarefree polynomial.
PolyC without_z(const PolyC& s) {
  if (s.degree() >= 1 && s[0].is_zero()) return poly_exact_div(s, kZ);
  return s;
}

std::string poly_str(const PolyC& p) { return p.to_string(); }

}  // namespace

// ---------------------------------------------------------------------------
// Ladder of derivative coefficients

namespace detail {

std::vector<OrderPart> ladder_orders(const ExpPoly& e, const PolyC& s, int cap) {
  std::vector<OrderPart> out;
  if (s.degree() < 1) return out;
  if (e.is_zero()) throw Error(ErrorKind::DivisionByZero, "vanishing order of the zero function");
  std::vector<ExpPoly> levels{e};
  struct Item {
    PolyC part;
    int level;
  };
  std::vector<Item> stack{{s.monic(), 0}};
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    if (cap >= 0 && item.level >= cap) {
      out.push_back({item.part, cap, 0, PolyC()});
      continue;
    }
    while (static_cast<int>(levels.size()) <= item.level) levels.push_back(ep_derivative(levels.back()));
    const ExpPoly& c = levels[static_cast<size_t>(item.level)];
    bool resolved = false;
    for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it) {
      const auto& [j, p] = *it;
      PolyC h = poly_gcd(item.part, p);
      if (h.degree() == 0) {
        out.push_back({item.part, item.level, j, p});
        resolved = true;
        break;
      }
      if (h.degree() < item.part.degree()) {
        stack.push_back({poly_exact_div(item.part, h), item.level});
        stack.push_back({h, item.level});
        resolved = true;
        break;
      }
    }
    if (!resolved) stack.push_back({item.part, item.level + 1});
  }
  std::sort(out.begin(), out.end(), [](const OrderPart& a, const OrderPart& b) { return a.part < b.part; });
  return out;
}

std::vector<RefinedPart> refine_orders(const PolyC& s, const std::vector<ExpPoly>& fns) {
  std::vector<RefinedPart> parts;
  if (s.degree() < 1) return parts;
  parts.push_back({s.monic(), {}});
  for (const auto& f : fns) {
    std::vector<RefinedPart> next;
    for (const auto& rp : parts) {
      for (const auto& op : ladder_orders(f, rp.part)) {
        RefinedPart np{op.part, rp.orders};
        np.orders.push_back(op.order);
        next.push_back(std::move(np));
      }
    }
    parts = std::move(next);
  }
  return parts;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entirety

std::string EntiretyWitness::to_string() const {
  std::ostringstream os;
  os << "factor " << poly_str(factor) << ": required order " << required << ", actual " << actual;
  if (level >= 0)
    os << " (coefficient " << poly_str(coefficient) << " of s^" << sigma << " at derivative level " << level
       << " is nonzero at its roots)";
  return os.str();
}

EntiretyResult is_entire(const ExpPoly& num, const PolyC& den) {
  if (den.is_zero()) throw Error(ErrorKind::ZeroDenominator, "zero denominator");
  EntiretyResult res;
  res.entire = true;
  if (num.is_zero() || den.degree() == 0) return res;
  for (const auto& [s, m] : squarefree_decomposition(den)) {
    if (s[0].is_zero()) {
      // Exact Taylor expansion at 0; only the first m coefficients matter.
      auto coeffs = num.taylor_at_zero(m);
      int order = m;
      for (int n = 0; n < m; ++n)
        if (!coeffs[static_cast<size_t>(n)].is_zero()) {
          order = n;
          break;
        }
      if (order < m) {
        res.entire = false;
        res.witness = EntiretyWitness{kZ, m, order, -1, 0, PolyC()};
        return res;
      }
      res.certificate.entries.push_back({kZ, m, "taylor", order, {}});
    }
    PolyC rest = without_z(s);
    if (rest.degree() < 1) continue;
    for (const auto& op : detail::ladder_orders(num, rest, m)) {
      if (op.order < m) {
        res.entire = false;
        res.witness = EntiretyWitness{op.part, m, op.order, op.order, op.sigma, op.coefficient};
        return res;
      }
      CertificateEntry entry{op.part, m, "ladder", m, {}};
      ExpPoly level = num;
      for (int k = 0; k < m; ++k) {
        std::vector<int> js;
        for (const auto& [j, p] : level.terms()) js.push_back(j);
        entry.divisible.push_back(std::move(js));
        level = ep_derivative(level);
      }
      res.certificate.entries.push_back(std::move(entry));
    }
  }
  return res;
}

bool replay_certificate(const ExpPoly& num, const PolyC& den, const EntiretyCertificate& cert) {
  if (den.is_zero()) return false;
  if (num.is_zero()) return true;
  PolyC product = kOne;
  for (const auto& e : cert.entries) product *= poly_pow(e.factor, e.multiplicity);
  if (product != den.monic()) return false;
  for (const auto& e : cert.entries) {
    if (e.method == "taylor") {
      if (e.factor != kZ || num.order_at_zero() < e.multiplicity) return false;
      continue;
    }
    if (e.method != "ladder" || static_cast<int>(e.divisible.size()) != e.multiplicity) return false;
    if (!e.factor.is_zero() && e.factor[0].is_zero()) return false;  // root 0 needs Taylor
    ExpPoly level = num;
    for (int k = 0; k < e.multiplicity; ++k) {
      std::vector<int> js;
      for (const auto& [j, p] : level.terms()) {
        if (!poly_divides(e.factor, p)) return false;
        js.push_back(j);
      }
      if (js != e.divisible[static_cast<size_t>(k)]) return false;
      level = ep_derivative(level);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// HElement

HElement::HElement(GaussianRational c) : HElement(ExpPoly(std::move(c))) {}

HElement::HElement(const ExpPoly& p) { *this = h_normalize(p, kOne); }

HElement h_normalize(const ExpPoly& num_in, const PolyC& den_in) {
  if (den_in.is_zero()) throw Error(ErrorKind::ZeroDenominator, "zero denominator");
  HElement out;
  if (num_in.is_zero()) {
    out.compile();
    return out;
  }
  EntiretyResult ent = is_entire(num_in, den_in);
  if (!ent) throw Error(ErrorKind::NotEntire, "not entire: " + ent.witness->to_string());
  ExpPoly num = num_in;
  PolyC den = den_in;
  PolyC c = poly_gcd(den, num.content());
  if (c.degree() > 0) {
    num = num.divided_by(c);
    den = poly_exact_div(den, c);
  }
  const int k = num.valuation();
  num = num.shifted(-k);
  GaussianRational lead = num.leading_coeff().leading();
  GaussianRational den_lead = den.leading();
  out.unit_ = Unit{lead / den_lead, k};
  out.num_ = num.scaled(lead.inverse());
  out.den_ = den.monic();
  out.certificate_ = is_entire(out.num_, out.den_).certificate;
  out.compile();
  return out;
}

HElement h_unit(const Unit& u) {
  if (u.c.is_zero()) return {};
  return HElement(ExpPoly::term(u.k, PolyC(u.c)));
}

void HElement::compile() {
  ExpPoly f = full_numerator();
  fnum_ = CompiledExpPoly(f);
  dfnum_ = CompiledExpPoly(ep_derivative(f));
  den_roots_ = numeric_roots(den_);
}

ExpPoly HElement::full_numerator() const {
  if (is_zero()) return {};
  return num_.shifted(unit_.k).scaled(unit_.c);
}

Complex HElement::eval_direct(Complex z) const { return fnum_(z) / den_.eval(z); }

Complex HElement::eval_derivative_direct(Complex z) const {
  Complex d = den_.eval(z);
  Complex dd = den_.derivative().eval(z);
  return (dfnum_(z) * d - fnum_(z) * dd) / (d * d);
}

double HElement::mean_value_radius(Complex z) const {
  constexpr double kNear = 0.5;
  auto min_dist = [&](Complex w) {
    double m = std::numeric_limits<double>::infinity();
    for (auto r : den_roots_) m = std::min(m, std::abs(w - r));
    return m;
  };
  if (den_roots_.empty() || min_dist(z) >= kNear) return 0.0;
  for (double rho : {1.0, 1.5, 0.75, 2.0, 3.0}) {
    bool ok = true;
    for (int k = 0; k < 64 && ok; ++k) ok = min_dist(z + std::polar(rho, 2.0 * M_PI * k / 64)) >= 0.25;
    if (ok) return rho;
  }
  return 1.0;
}

Complex HElement::eval(Complex z) const {
  if (is_zero()) return {0.0, 0.0};
  double rho = mean_value_radius(z);
  if (rho == 0.0) return eval_direct(z);
  constexpr int kPoints = 64;
  Complex acc{0.0, 0.0};
  for (int k = 0; k < kPoints; ++k) acc += eval_direct(z + std::polar(rho, 2.0 * M_PI * k / kPoints));
  return acc / static_cast<double>(kPoints);
}

Complex HElement::eval_derivative(Complex z) const {
  if (is_zero()) return {0.0, 0.0};
  double rho = mean_value_radius(z);
  if (rho == 0.0) return eval_derivative_direct(z);
  constexpr int kPoints = 64;
  Complex acc{0.0, 0.0};
  for (int k = 0; k < kPoints; ++k) {
    Complex e = std::polar(1.0, 2.0 * M_PI * k / kPoints);
    acc += eval_direct(z + rho * e) / e;
  }
  return acc / (rho * kPoints);
}

HElement HElement::operator-() const {
  HElement out = *this;
  out.unit_.c = -out.unit_.c;
  out.compile();
  return out;
}

HElement operator+(const HElement& a, const HElement& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  ExpPoly n = a.full_numerator() * ExpPoly(b.den_) + b.full_numerator() * ExpPoly(a.den_);
  return h_normalize(n, a.den_ * b.den_);
}

HElement operator-(const HElement& a, const HElement& b) { return a + (-b); }

HElement operator*(const HElement& a, const HElement& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return h_normalize(a.full_numerator() * b.full_numerator(), a.den_ * b.den_);
}

HElement HElement::associate() const {
  if (is_zero()) return *this;
  HElement out = *this;
  out.unit_ = Unit{};
  out.compile();
  return out;
}

HElement HElement::unit_inverse() const {
  if (!is_unit()) throw Error(ErrorKind::DivisionByZero, "inverse of a non-unit");
  GaussianRational c = unit_.c * num_.coeff(0)[0] / den_[0];
  return h_unit(Unit{c.inverse(), -unit_.k});
}

std::string HElement::to_string() const {
  if (is_zero()) return "0";
  std::string n = full_numerator().to_string();
  if (den_.is_one()) return n;
  bool simple_den = den_.degree() >= 1 && den_.valuation() == den_.degree() && den_.leading().is_one();
  std::string d = simple_den ? den_.to_string() : "(" + den_.to_string() + ")";
  return "(" + n + ")/" + d;
}

// ---------------------------------------------------------------------------
// Divisibility

ExpPoly ep_exact_div(const ExpPoly& a, const ExpPoly& b) {
  auto [q, r] = laurent_divmod(a, b);
  if (!r.is_zero()) throw Error(ErrorKind::DivisionByZero, "inexact exponential polynomial division");
  auto [n, d] = q.cleared();
  if (!d.is_one()) throw Error(ErrorKind::DivisionByZero, "quotient has non-polynomial coefficients");
  return n;
}

DivisionResult h_divides(const HElement& a, const HElement& b) {
  if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "h_divides by zero");
  DivisionResult res;
  if (b.is_zero()) {
    res.quotient = HElement();
    return res;
  }
  // b / a = (Nb * da) / (Na * db).
  auto [q, r] = laurent_divmod(b.full_numerator() * ExpPoly(a.den()), a.full_numerator());
  if (!r.is_zero()) {
    res.failure = DivisionResult::Failure::SigmaDivision;
    res.detail = "nonzero remainder " + r.to_string() + " in sigma-division";
    return res;
  }
  auto [qn, l] = q.cleared();
  PolyC den = l * b.den();
  EntiretyResult ent = is_entire(qn, den);
  if (!ent) {
    res.failure = DivisionResult::Failure::Entirety;
    res.detail = "quotient not entire: " + ent.witness->to_string();
    return res;
  }
  res.quotient = h_normalize(qn, den);
  return res;
}

// ---------------------------------------------------------------------------
// Algebraic zeros and gcd

ZeroDivisorPart algebraic_zero_divisor(const HElement& a) {
  if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero divisor of the zero element");
  ZeroDivisorPart out;
  const ExpPoly& num = a.num();
  const int at_zero = num.order_at_zero() - order_of_z(a.den());
  if (at_zero > 0) out.push_back({kZ, at_zero});
  PolyC support = without_z(squarefree_part(num.content()));
  for (const auto& rp : detail::refine_orders(support, {num, ExpPoly(a.den())})) {
    int m = rp.orders[0] - rp.orders[1];
    if (m > 0) out.push_back({rp.part, m});
  }
  return out;
}

HElement h_gcd(const HElement& a, const HElement& b) {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorKind::BothZero, "gcd of two zeros");
  if (a.is_zero()) return b.associate();
  if (b.is_zero()) return a.associate();
  const ExpPoly& na = a.num();
  const ExpPoly& nb = b.num();
  ExpPoly g0 = ep_gcd(na, nb);
  ExpPoly ca = ep_exact_div(na, g0);
  ExpPoly cb = ep_exact_div(nb, g0);
  PolyC res = sigma_resultant(ca, cb);
  PolyC support = squarefree_part(res * a.den() * b.den());
  ExpPoly gnum = g0;
  PolyC gden = kOne;
  auto apply = [&](const PolyC& part, int e) {
    if (e > 0) gnum = gnum * ExpPoly(poly_pow(part, e));
    if (e < 0) gden *= poly_pow(part, -e);
  };
  if (support.degree() >= 1 && support[0].is_zero()) {
    int ea = ca.order_at_zero() - order_of_z(a.den());
    int eb = cb.order_at_zero() - order_of_z(b.den());
    apply(kZ, std::min(ea, eb));
  }
  for (const auto& rp : detail::refine_orders(without_z(support), {ca, cb, ExpPoly(a.den()), ExpPoly(b.den())}))
    apply(rp.part, std::min(rp.orders[0] - rp.orders[2], rp.orders[1] - rp.orders[3]));
  HElement g = h_normalize(gnum, gden).associate();
  if (!h_divides(g, a) || !h_divides(g, b))
    throw Error(ErrorKind::BothZero, "internal: gcd candidate " + g.to_string() + " fails re-verification");
  return g;
}

// ---------------------------------------------------------------------------
// Bezout

namespace {

struct SplitRequest {
  PolyC factor;
};

// Arithmetic in Q(i)[x]/(m) for squarefree m. A zero divisor raises
// SplitRequest so the caller can continue on the two coprime factors.
class ResidueRing {
 public:
  explicit ResidueRing(PolyC modulus) : mod_(std::move(modulus)) {}
  const PolyC& modulus() const { return mod_; }

  PolyC reduce(const PolyC& p) const { return poly_divmod(p, mod_).remainder; }
  PolyC mul(const PolyC& a, const PolyC& b) const { return reduce(a * b); }

  bool is_zero(const PolyC& a) const {
    PolyC r = reduce(a);
    if (r.is_zero()) return true;
    PolyC g = poly_gcd(r, mod_);
    if (g.degree() > 0) throw SplitRequest{g};
    return false;
  }

  PolyC inverse(const PolyC& a) const {
    auto x = poly_xgcd(reduce(a), mod_);
    if (x.g.degree() != 0) {
      if (x.g.is_zero() || x.g.degree() == mod_.degree()) throw Error(ErrorKind::DivisionByZero, "inverse of zero residue");
      throw SplitRequest{x.g};
    }
    return reduce(x.s);
  }

  ExpPoly reduce(const ExpPoly& e) const {
    ExpPoly::Terms t;
    for (const auto& [j, p] : e.terms())
      if (!is_zero(p)) t.emplace(j, reduce(p));
    return ExpPoly(std::move(t));
  }

  ExpPoly mul(const ExpPoly& a, const ExpPoly& b) const { return reduce(a * b); }

  // Exact division in (Q(i)[x]/m)[E, 1/E]; nullopt when not divisible.
  std::optional<ExpPoly> divide(const ExpPoly& n_in, const ExpPoly& d_in) const {
    ExpPoly n = reduce(n_in);
    ExpPoly d = reduce(d_in);
    if (d.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero in residue ring");
    if (n.is_zero()) return ExpPoly();
    const int vn = n.valuation();
    const int vd = d.valuation();
    ExpPoly r = n.shifted(-vn);
    ExpPoly d0 = d.shifted(-vd);
    PolyC inv = inverse(d0.leading_coeff());
    ExpPoly q;
    const int dd = d0.sigma_degree();
    while (!r.is_zero() && r.sigma_degree() >= dd) {
      int k = r.sigma_degree() - dd;
      PolyC t = mul(r.leading_coeff(), inv);
      ExpPoly mono = ExpPoly::term(k, t);
      q += mono;
      r = reduce(r - mono * d0);
    }
    if (!r.is_zero()) return std::nullopt;
    return q.shifted(vn - vd);
  }

 private:
  PolyC mod_;
};

GaussianRational inverse_factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return {mpq_class(mpz_class(1), f), mpq_class(0)};
}

GaussianRational power_over_factorial(int j, int n) {
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), mpz_class(j).get_mpz_t(), static_cast<unsigned long>(n));
  return GaussianRational(mpq_class(p), mpq_class(0)) * inverse_factorial(n);
}

// Taylor jets in h of F(x + h, E e^h): the k-th is D^k F / k!.
std::vector<ExpPoly> jets(const ExpPoly& f, int count) {
  std::vector<ExpPoly> out;
  ExpPoly level = f;
  for (int k = 0; k < count; ++k) {
    out.push_back(level.scaled(inverse_factorial(k)));
    level = ep_derivative(level);
  }
  return out;
}

// Per sigma-exponent polynomial data of the correction W, known modulo some
// polynomial modulus.
struct Residues {
  PolyC modulus;
  std::map<int, PolyC> by_sigma;
};

Residues crt(const Residues& a, const Residues& b) {
  auto x = poly_xgcd(a.modulus, b.modulus);
  if (x.g.degree() != 0) throw Error(ErrorKind::NoRationalCofactors, "internal: CRT moduli not coprime");
  // s*ma + t*mb = 1; P = Pa + ma * ((Pb - Pa) * s mod mb).
  Residues out;
  out.modulus = a.modulus * b.modulus;
  std::vector<int> keys;
  for (const auto& [j, p] : a.by_sigma) keys.push_back(j);
  for (const auto& [j, p] : b.by_sigma) keys.push_back(j);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (int j : keys) {
    PolyC pa = a.by_sigma.count(j) ? a.by_sigma.at(j) : PolyC();
    PolyC pb = b.by_sigma.count(j) ? b.by_sigma.at(j) : PolyC();
    PolyC t = poly_divmod((pb - pa) * x.s, b.modulus).remainder;
    PolyC p = poly_divmod(pa + a.modulus * t, out.modulus).remainder;
    if (!p.is_zero()) out.by_sigma[j] = p;
  }
  return out;
}

[[noreturn]] void no_cofactors(const PolyC& part, int level, const std::string& why) {
  throw Error(ErrorKind::NoRationalCofactors,
              "no Bezout cofactors with Q(i) coefficients: at the roots a of " + poly_str(part) + " (jet order " +
                  std::to_string(level) + ") " + why);
}

// Solves W * divisor = target modulo (z - a)^m at every root a of psi (psi
// coprime to z), treating E = e^a as transcendental.
Residues solve_block(const PolyC& psi, int m, const ExpPoly& target, const ExpPoly& divisor) {
  ResidueRing ring(psi);
  auto tj = jets(target, m);
  auto dj = jets(divisor, m);
  std::vector<ExpPoly> w;  // series coefficients of W(x+h, E e^h)
  for (int k = 0; k < m; ++k) {
    ExpPoly rhs = tj[static_cast<size_t>(k)];
    for (int i = 1; i <= k; ++i) rhs -= dj[static_cast<size_t>(i)] * w[static_cast<size_t>(k - i)];
    auto q = ring.divide(rhs, dj[0]);
    if (!q) no_cofactors(psi, k, "the required jet is not a Laurent polynomial in e^a");
    w.push_back(*q);
  }
  // Taylor coefficients of each W_j at the roots.
  std::map<int, std::vector<PolyC>> taylor;
  for (int k = 0; k < m; ++k)
    for (const auto& [j, p] : w[static_cast<size_t>(k)].terms()) taylor[j].resize(static_cast<size_t>(m));
  for (auto& [j, t] : taylor) {
    for (int k = 0; k < m; ++k) {
      PolyC c = w[static_cast<size_t>(k)].coeff(j);
      for (int a = 0; a < k; ++a) c -= t[static_cast<size_t>(a)] * power_over_factorial(j, k - a);
      t[static_cast<size_t>(k)] = ring.reduce(c);
    }
  }
  // Hermite lift modulo psi^m.
  Residues out;
  out.modulus = poly_pow(psi, m);
  PolyC dpsi_inv = ring.inverse(psi.derivative());
  for (const auto& [j, t] : taylor) {
    PolyC p = t[0];
    PolyC psi_k = kOne;
    PolyC inv_k = kOne;
    for (int k = 1; k < m; ++k) {
      psi_k *= psi;
      inv_k = ring.mul(inv_k, dpsi_inv);
      PolyC dk = p;
      for (int i = 0; i < k; ++i) dk = dk.derivative();
      PolyC current = ring.reduce(dk * inverse_factorial(k));
      PolyC corr = ring.mul(t[static_cast<size_t>(k)] - current, inv_k);
      p += psi_k * corr;
    }
    p = poly_divmod(p, out.modulus).remainder;
    if (!p.is_zero()) out.by_sigma[j] = p;
  }
  return out;
}

// Same problem at the root 0, where e^0 = 1 and everything is a rational power
// series. W is taken sigma-free.
Residues solve_at_zero(int m, int divisor_order, const ExpPoly& target, const ExpPoly& divisor) {
  Residues out;
  const int need = m - divisor_order;
  out.modulus = poly_pow(kZ, std::max(need, 0));
  if (m <= 0) {
    out.modulus = kOne;
    return out;
  }
  auto t = target.taylor_at_zero(m);
  auto d = divisor.taylor_at_zero(m + 1);
  for (int n = 0; n < std::min(divisor_order, m); ++n)
    if (!t[static_cast<size_t>(n)].is_zero()) no_cofactors(kZ, n, "the target does not vanish to the divisor order");
  if (need <= 0) {
    out.modulus = kOne;
    return out;
  }
  // Series quotient (t / z^o) / (d / z^o) modulo z^need.
  std::vector<GaussianRational> q(static_cast<size_t>(need));
  GaussianRational lead_inv = d[static_cast<size_t>(divisor_order)].inverse();
  for (int n = 0; n < need; ++n) {
    GaussianRational acc = t[static_cast<size_t>(n + divisor_order)];
    for (int i = 1; i <= n; ++i) {
      size_t di = static_cast<size_t>(i + divisor_order);
      if (di < d.size()) acc -= d[di] * q[static_cast<size_t>(n - i)];
    }
    q[static_cast<size_t>(n)] = acc * lead_inv;
  }
  PolyC w(std::move(q));
  if (!w.is_zero()) out.by_sigma[0] = w;
  return out;
}

}  // namespace

BezoutResult h_bezout(const HElement& a, const HElement& b, const BezoutOptions& opts) {
  BezoutResult res;
  res.g = h_gcd(a, b);
  if (a.is_zero()) {
    res.u = HElement();
    res.v = b.associate() == b ? HElement(GaussianRational(1)) : *h_divides(b, res.g).quotient;
    return res;
  }
  if (b.is_zero()) {
    res.v = HElement();
    res.u = *h_divides(a, res.g).quotient;
    return res;
  }
  HElement A = *h_divides(res.g, a).quotient;
  HElement B = *h_divides(res.g, b).quotient;
  auto finish = [&](HElement u, HElement v, int tier) {
    if (u * a + v * b != res.g)
      throw Error(ErrorKind::NoRationalCofactors, "internal: Bezout identity failed re-verification");
    res.u = std::move(u);
    res.v = std::move(v);
    res.tier = tier;
    return res;
  };
  if (B.is_unit()) return finish(HElement(), B.unit_inverse(), 0);
  if (A.is_unit()) return finish(A.unit_inverse(), HElement(), 0);

  const ExpPoly an = A.full_numerator();
  const ExpPoly bn = B.full_numerator();
  const PolyC& ad = A.den();
  const PolyC& bd = B.den();
  SigmaXgcd x = sigma_xgcd(an, bn);  // x.u * an + x.v * bn = x.l
  ExpPoly unum = x.u * ExpPoly(ad);
  ExpPoly vnum = x.v * ExpPoly(bd);
  if (is_entire(unum, x.l) && is_entire(vnum, x.l))
    return finish(h_normalize(unum, x.l), h_normalize(vnum, x.l), 1);
  if (!opts.jet_correction)
    throw Error(ErrorKind::NoRationalCofactors, "extended-Euclid cofactors are not in H and jet correction is disabled");

  // u = ad (U + W bn) / l,  v = bd (V - W an) / l. At each root of l one of
  // the two must vanish to the multiplicity of l, whichever side has the
  // nonvanishing cofactor.
  std::vector<Residues> pieces;
  for (const auto& [s, m] : squarefree_decomposition(x.l)) {
    if (s[0].is_zero()) {
      int oa = an.order_at_zero();
      bool a_nonzero = oa == order_of_z(ad);
      if (a_nonzero)
        pieces.push_back(solve_at_zero(m - order_of_z(bd), oa, x.v, an));
      else
        pieces.push_back(solve_at_zero(m - order_of_z(ad), bn.order_at_zero(), -x.u, bn));
    }
    std::vector<PolyC> work{without_z(s)};
    while (!work.empty()) {
      PolyC psi = work.back();
      work.pop_back();
      if (psi.degree() < 1) continue;
      if (poly_gcd(psi, ad * bd).degree() > 0)
        throw Error(ErrorKind::NoRationalCofactors, "internal: denominator root off the origin");
      try {
        for (const auto& rp : detail::refine_orders(psi, {an, bn})) {
          if (rp.orders[0] == 0)
            pieces.push_back(solve_block(rp.part, m, x.v, an));
          else if (rp.orders[1] == 0)
            pieces.push_back(solve_block(rp.part, m, -x.u, bn));
          else
            throw Error(ErrorKind::NoRationalCofactors, "internal: common zero of coprime cofactors");
        }
      } catch (const SplitRequest& split) {
        work.push_back(split.factor.monic());
        work.push_back(poly_exact_div(psi, split.factor).monic());
      }
    }
  }
  Residues all{kOne, {}};
  for (const auto& p : pieces) all = crt(all, p);
  ExpPoly::Terms wt;
  for (const auto& [j, p] : all.by_sigma) wt.emplace(j, p);
  ExpPoly w(std::move(wt));
  ExpPoly u2 = (x.u + w * bn) * ExpPoly(ad);
  ExpPoly v2 = (x.v - w * an) * ExpPoly(bd);
  EntiretyResult eu = is_entire(u2, x.l);
  EntiretyResult ev = is_entire(v2, x.l);
  if (!eu || !ev)
    throw Error(ErrorKind::NoRationalCofactors,
                "internal: jet-corrected cofactor not entire: " + (eu ? ev : eu).witness->to_string());
  return finish(h_normalize(u2, x.l), h_normalize(v2, x.l), 2);
}

}  // namespace ddelta
