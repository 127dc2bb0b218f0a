#include "ddelta/division.hpp"

#include <cmath>

#include "ddelta/hefer.hpp"
#include "ddelta/synthesis.hpp"

namespace ddelta {

namespace {

template <typename Scalar>
bool same_node(const Scalar& a, const Scalar& b) {
  if constexpr (std::is_same_v<Scalar, Complex>)
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
  else
    return a == b;
}

// Newton form over repeated nodes, expanded into powers of z.
template <typename Scalar>
std::vector<Scalar> hermite(const std::vector<Jet<Scalar>>& spec) {
  for (size_t i = 0; i < spec.size(); ++i)
    for (size_t j = i + 1; j < spec.size(); ++j)
      if (same_node(spec[i].node, spec[j].node)) throw Error(ErrorKind::DuplicateNode, "interpolation node repeated");
  std::vector<Scalar> z;
  std::vector<size_t> owner;
  for (size_t i = 0; i < spec.size(); ++i)
    for (size_t k = 0; k < spec[i].values.size(); ++k) {
      z.push_back(spec[i].node);
      owner.push_back(i);
    }
  const size_t n = z.size();
  if (n == 0) return {};
  // table[i] holds f[z_i, ..., z_{i+level}] after each level.
  std::vector<Scalar> table(n), newton;
  for (size_t i = 0; i < n; ++i) table[i] = spec[owner[i]].values[0];
  newton.push_back(table[0]);
  Scalar fact(1);
  for (size_t level = 1; level < n; ++level) {
    fact = fact * Scalar(static_cast<long>(level));
    for (size_t i = 0; i + level < n; ++i) {
      if (owner[i] == owner[i + level])
        table[i] = spec[owner[i]].values[level] / fact;
      else
        table[i] = (table[i + 1] - table[i]) / (z[i + level] - z[i]);
    }
    newton.push_back(table[0]);
  }
  // Horner on the Newton basis.
  std::vector<Scalar> poly{newton[n - 1]};
  for (size_t k = n - 1; k-- > 0;) {
    std::vector<Scalar> next(poly.size() + 1, Scalar(0));
    for (size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] = next[d + 1] + poly[d];
      next[d] = next[d] - z[k] * poly[d];
    }
    next[0] = next[0] + newton[k];
    poly = std::move(next);
  }
  return poly;
}

GrowthCert certify(const HElement& c) {
  GrowthCert g;
  g.denom_witness = PolyC(GaussianRational(1));
  if (c.is_zero()) return g;
  GrowthBounds b = growth_bounds(c);
  g.C = b.C;
  g.M = b.M;
  g.N = b.N;
  return g;
}

// Power series of a/b at 0 to `order` terms; b(0) != 0.
std::vector<GaussianRational> series_div(const std::vector<GaussianRational>& a, const std::vector<GaussianRational>& b,
                                         size_t order) {
  std::vector<GaussianRational> q(order);
  const GaussianRational inv = b[0].inverse();
  for (size_t n = 0; n < order; ++n) {
    GaussianRational acc = n < a.size() ? a[n] : GaussianRational(0);
    for (size_t k = 1; k <= n && k < b.size(); ++k) acc -= b[k] * q[n - k];
    q[n] = acc * inv;
  }
  return q;
}

}  // namespace

PolyC hermite_interpolate(const ExactJetSpec& spec) {
  for (const auto& j : spec)
    if (j.values.empty()) throw Error(ErrorKind::Usage, "empty jet");
  return PolyC(hermite(spec));
}

std::vector<Complex> hermite_interpolate(const JetSpec& spec) {
  for (const auto& j : spec)
    if (j.values.empty()) throw Error(ErrorKind::Usage, "empty jet");
  return hermite(spec);
}

MembershipResult ideal_member(const HElement& h, const std::vector<HElement>& gens, const BezoutOptions& opts) {
  const size_t r = gens.size();
  MembershipResult res;
  std::vector<HElement> u(r);
  bool started = false;
  for (size_t k = 0; k < r; ++k) {
    if (gens[k].is_zero()) continue;
    if (!started) {
      res.gcd = gens[k];
      u[k] = HElement(GaussianRational(1));
      started = true;
      continue;
    }
    BezoutResult bz = h_bezout(res.gcd, gens[k], opts);
    for (auto& x : u) x = bz.u * x;
    u[k] = bz.v;
    res.gcd = bz.g;
  }
  if (!started) throw Error(ErrorKind::DivisionByZero, "all generators are zero");
  auto q = h_divides(res.gcd, h);
  if (!q) {
    res.member = false;
    return res;
  }
  res.member = true;
  HElement sum;
  for (size_t k = 0; k < r; ++k) {
    res.cofactors.push_back(*q.quotient * u[k]);
    sum = sum + res.cofactors.back() * gens[k];
    res.growth.push_back(certify(res.cofactors.back()));
  }
  res.identity_verified = sum == h;
  if (!res.identity_verified)
    throw Error(ErrorKind::NoRationalCofactors, "internal: membership identity failed to replay");
  return res;
}

TruncationSplit truncation_split(const HElement& p, Complex node, int mu) {
  if (mu < 1) throw Error(ErrorKind::Usage, "truncation order must be at least 1");
  TruncationSplit out;
  if (p.is_zero()) {
    out.coeffs.assign(static_cast<size_t>(mu), Complex(0, 0));
    out.exact = PolyC();
    out.tail_order = std::numeric_limits<int>::max();
    out.verified = true;
    return out;
  }
  if (node == Complex(0, 0)) {
    // Exact: q* = (num / z^v) / (den / z^v) as power series.
    const int v = p.den().valuation();
    const size_t order = static_cast<size_t>(mu) + 8;
    auto num = p.full_numerator().taylor_at_zero(static_cast<int>(order) + v);
    std::vector<GaussianRational> a(num.begin() + v, num.end());
    std::vector<GaussianRational> b;
    for (int k = v; k <= p.den().degree(); ++k) b.push_back(p.den()[k]);
    auto s = series_div(a, b, order);
    out.exact = PolyC(std::vector<GaussianRational>(s.begin(), s.begin() + mu));
    for (int k = 0; k < mu; ++k) out.coeffs.push_back(s[static_cast<size_t>(k)].to_complex());
    out.tail_order = static_cast<int>(order);
    for (size_t k = static_cast<size_t>(mu); k < order; ++k)
      if (!s[k].is_zero()) {
        out.tail_order = static_cast<int>(k);
        break;
      }
    out.verified = out.tail_order >= mu;
    return out;
  }
  out.coeffs = taylor_coefficients(p, node, mu);
  // Winding number of P* - P_trunc around the node.
  const double rho = 0.2;
  const int n = 512;
  double turn = 0;
  Complex prev;
  for (int k = 0; k <= n; ++k) {
    Complex w = std::polar(rho, 2 * M_PI * k / n);
    Complex t{0, 0};
    for (size_t j = out.coeffs.size(); j-- > 0;) t = t * w + out.coeffs[j];
    Complex g = p.eval(node + w) - t;
    if (k > 0) turn += std::arg(g / prev);
    prev = g;
  }
  out.tail_order = static_cast<int>(std::lround(turn / (2 * M_PI)));
  out.verified = out.tail_order >= mu;
  return out;
}

}  // namespace ddelta
