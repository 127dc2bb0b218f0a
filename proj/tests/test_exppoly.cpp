#include "doctest.h"
#include "helpers.hpp"

using namespace ddelta;
using namespace testing_util;

namespace {

// Real root of x e^x = 1 by bisection.
double omega_by_bisection() {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gaussian rationals") {
  auto a = GaussianRational::from_fraction(1, 2) + GaussianRational::from_fraction(3, 4) * GaussianRational::i();
  CHECK(a.to_string() == "(1/2+3/4i)");
  CHECK((a * a.inverse()).is_one());
  CHECK(GaussianRational::from_fraction(6, -4).to_string() == "-3/2");
  CHECK(GaussianRational::i().to_string() == "i");
  CHECK((-GaussianRational::i()).to_string() == "-i");
  CHECK(a.conj() * a == GaussianRational(a.norm(), mpq_class(0)));
}

TEST_CASE("poly_gcd") {
  CHECK(poly_gcd(P({-1, 0, 1}), P({-1, 1})) == P({-1, 1}));
  CHECK(poly_gcd(P({0, 1}), P({1})) == P({1}));
  PolyC a = P({0, -1, 0, 1});
  PolyC b = P({1, 2, 1});
  PolyC g = poly_gcd(a, b);
  CHECK(g == P({1, 1}));
  CHECK(poly_divides(g, a));
  CHECK(poly_divides(g, b));
  // Nothing bigger: the cofactors are coprime.
  CHECK(poly_gcd(poly_exact_div(a, g), poly_exact_div(b, g)).is_one());
  CHECK(poly_gcd(PolyC(), PolyC()).is_zero());
}

TEST_CASE("squarefree decomposition and xgcd") {
  PolyC p = poly_pow(P({-1, 1}), 3) * P({0, 1}) * poly_pow(P({1, 0, 1}), 2);
  auto sq = squarefree_decomposition(p);
  PolyC prod(GaussianRational(1));
  for (auto& [s, m] : sq) prod *= poly_pow(s, m);
  CHECK(prod == p.monic());
  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    PolyC a = random_poly(rng, 4), b = random_poly(rng, 4);
    if (a.is_zero() || b.is_zero()) continue;
    auto x = poly_xgcd(a, b);
    CHECK(x.s * a + x.t * b == x.g);
    CHECK(x.g == poly_gcd(a, b));
  }
}

TEST_CASE("ep ring operations") {
  CHECK(ep_mul(S - C(1), S + C(1)) == ep_pow(S, 2) - C(1));
  CHECK(ep_add(S - C(1), C(1) - S).is_zero());
  CHECK(ep_mul(Z * S, ExpPoly::sigma(-1)) == Z);
  CHECK((ep_pow(S, 2) - C(1)).to_string() == "s^2 - 1");
}

TEST_CASE("ep_derivative") {
  CHECK(ep_derivative(S) == S);
  CHECK(ep_derivative(Z * S) == (Z + C(1)) * S);
  CHECK(ep_derivative(Z * Z) == C(2) * Z);
}

TEST_CASE("ep_eval") {
  CHECK(std::abs(ep_eval(S - C(1), Complex(0, M_PI)) - Complex(-2, 0)) < 1e-14);
  CHECK(std::abs(ep_eval(S - C(1), 0.0)) == 0.0);
  double w = omega_by_bisection();
  CHECK(std::abs(ep_eval(Z * S - C(1), w)) < 1e-6);
  CHECK_THROWS_AS(ep_eval(ExpPoly::sigma(3), Complex(400, 0)), Error);
}

TEST_CASE("laurent_divmod") {
  auto r1 = laurent_divmod(ep_pow(S, 2) - C(1), S - C(1));
  CHECK(r1.quotient == RatExpPoly(S + C(1)));
  CHECK(r1.remainder.is_zero());
  auto r2 = laurent_divmod(Z, S - C(1));
  CHECK(r2.quotient.is_zero());
  CHECK(r2.remainder == RatExpPoly(Z));
  auto r3 = laurent_divmod(ep_pow(S, 2), Z * S - C(1));
  RatFunc inv_z(P({1}), P({0, 1}));
  RatFunc inv_z2(P({1}), P({0, 0, 1}));
  RatExpPoly q({{1, inv_z}, {0, inv_z2}});
  CHECK(r3.quotient == q);
  CHECK(r3.remainder == RatExpPoly({{0, inv_z2}}));
  CHECK(q * RatExpPoly(Z * S - C(1)) + r3.remainder == RatExpPoly(ep_pow(S, 2)));
  CHECK_THROWS_AS(laurent_divmod(S, ExpPoly()), Error);
}

TEST_CASE("property: ring axioms") {
  std::mt19937 rng(1);
  for (int t = 0; t < 40; ++t) {
    ExpPoly a = random_ep(rng, -1, 2, 2), b = random_ep(rng, -1, 2, 2), c = random_ep(rng, -1, 2, 2);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
  }
}

TEST_CASE("property: derivative matches finite differences") {
  std::mt19937 rng(2);
  const double h = 1e-5;
  for (int t = 0; t < 20; ++t) {
    ExpPoly a = random_ep(rng, -2, 2, 3);
    if (a.is_zero()) continue;
    ExpPoly da = ep_derivative(a);
    for (double x = -1.0; x <= 1.0; x += 0.5)
      for (double y = -1.0; y <= 1.0; y += 0.5) {
        Complex z(x, y);
        Complex fd = (ep_eval(a, z + h) - ep_eval(a, z - h)) / (2 * h);
        Complex ex = ep_eval(da, z);
        CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
      }
  }
}

TEST_CASE("property: division identity and eval multiplicativity") {
  std::mt19937 rng(3);
  for (int t = 0; t < 30; ++t) {
    ExpPoly a = random_ep(rng, -1, 3, 2), b = random_ep(rng, 0, 2, 2);
    if (b.is_zero()) continue;
    auto [q, r] = laurent_divmod(a, b);
    CHECK(q * RatExpPoly(b) + r == RatExpPoly(a));
    if (!r.is_zero()) CHECK(r.sigma_degree() - r.valuation() < b.sigma_span());
    for (double x = -1.0; x <= 1.0; x += 1.0) {
      Complex z(x, 0.7 * x + 0.3);
      Complex lhs = ep_eval(a * b, z);
      Complex rhs = ep_eval(a, z) * ep_eval(b, z);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("ep_gcd, sigma_xgcd, resultant") {
  ExpPoly g = ep_gcd(Z * (S - C(1)), ep_pow(S, 2) - C(1));
  CHECK(g == S - C(1));
  CHECK(sigma_resultant(S - C(1), S + C(1)) != PolyC());
  CHECK(sigma_resultant(S - C(1), S + C(1)).degree() == 0);
  std::mt19937 rng(4);
  for (int t = 0; t < 20; ++t) {
    ExpPoly a = random_ep(rng, 0, 2, 2), b = random_ep(rng, 0, 2, 2);
    if (a.is_zero() || b.is_zero()) continue;
    if (ep_gcd(a, b).sigma_span() > 0) continue;
    auto x = sigma_xgcd(a, b);
    CHECK(x.u * a + x.v * b == ExpPoly(x.l));
  }
}

TEST_CASE("taylor at zero") {
  auto t = (S - C(1) - Z).taylor_at_zero(4);
  CHECK(t[0].is_zero());
  CHECK(t[1].is_zero());
  CHECK(t[2] == GaussianRational::from_fraction(1, 2));
  CHECK(t[3] == GaussianRational::from_fraction(1, 6));
  CHECK((S - C(1) - Z).order_at_zero() == 2);
}

TEST_CASE("numeric roots") {
  auto r = numeric_roots(P({2, -3, 1}));
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - 1.0) < 1e-12);
  CHECK(std::abs(r[1] - 2.0) < 1e-12);
}
