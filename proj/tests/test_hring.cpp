#include "ddelta/hring.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace ddelta;
using namespace testing_util;

namespace {

HElement H(const ExpPoly& n, const PolyC& d = P({1})) { return h_normalize(n, d); }

// Max of |num*/den| on a circle around c.
double max_on_circle(const ExpPoly& num, const PolyC& den, Complex c, double r) {
  double m = 0;
  for (int k = 0; k < 32; ++k) {
    Complex z = c + std::polar(r, 2 * M_PI * (k + 0.5) / 32);
    m = std::max(m, std::abs(ep_eval(num, z) / den.eval(z)));
  }
  return m;
}

}  // namespace

TEST_CASE("is_entire examples") {
  CHECK(is_entire(S - C(1), P({0, 1})).entire);
  auto r = is_entire(S - C(1), P({0, 0, 1}));
  CHECK_FALSE(r.entire);
  REQUIRE(r.witness);
  CHECK(r.witness->factor == P({0, 1}));
  CHECK(r.witness->required == 2);
  CHECK(r.witness->actual == 1);
  CHECK(is_entire(S - C(1) - Z, P({0, 0, 1})).entire);
  auto r2 = is_entire(Z * (S - C(1)), P({-1, 1}));
  CHECK_FALSE(r2.entire);
  REQUIRE(r2.witness);
  CHECK(r2.witness->factor == P({-1, 1}));
  CHECK(r2.witness->level == 0);
  CHECK(r2.witness->sigma == 1);
  CHECK(r2.witness->coefficient == P({0, 1}));
  CHECK(std::abs(ep_eval(Z * (S - C(1)), 1.0)) > 1.0);
  CHECK_THROWS_AS(is_entire(S, PolyC()), Error);
}

TEST_CASE("certificates replay") {
  ExpPoly num = (S - C(1)) * ep_pow(Z * Z + C(1), 2) * (Z * S + C(2));
  PolyC den = P({0, 1}) * poly_pow(P({1, 0, 1}), 2);
  auto r = is_entire(num, den);
  REQUIRE(r.entire);
  CHECK(replay_certificate(num, den, r.certificate));
  CHECK_FALSE(replay_certificate(num, den * P({-1, 1}), r.certificate));
  auto tampered = r.certificate;
  tampered.entries.back().divisible.back().push_back(7);
  CHECK_FALSE(replay_certificate(num, den, tampered));
}

TEST_CASE("h_normalize") {
  HElement a = H((Z - C(1)) * (S - C(1)), P({-1, 1}));
  CHECK(a == H(S - C(1)));
  CHECK(a.den().is_one());
  HElement b = H(C(2) * ep_pow(S, 2));
  CHECK(b.num() == C(1));
  CHECK(b.unit().c == GaussianRational(2));
  CHECK(b.unit().k == 2);
  CHECK(b.is_unit());
  HElement c = H(ep_pow(S, 2) - S, P({0, 1}));
  CHECK(c.num() == S - C(1));
  CHECK(c.unit().k == 1);
  CHECK(c.den() == P({0, 1}));
  CHECK_THROWS_AS(H(S - C(1), P({0, 0, 1})), Error);
  CHECK(H(C(3) * (S - C(1)), P({0, 2})) == H(C(3) * Z * (S - C(1)), P({0, 0, 2})));
}

TEST_CASE("h_divides") {
  auto d1 = h_divides(H(S - C(1)), H(ep_pow(S, 2) - C(1)));
  REQUIRE(d1);
  CHECK(*d1.quotient == H(S + C(1)));
  auto d2 = h_divides(H(Z), H(S - C(1)));
  REQUIRE(d2);
  CHECK(*d2.quotient == H(S - C(1), P({0, 1})));
  auto d3 = h_divides(H(S - C(1)), H(Z));
  CHECK_FALSE(d3);
  CHECK(d3.failure == DivisionResult::Failure::SigmaDivision);
  auto d4 = h_divides(H(Z * Z), H(S - C(1)));
  CHECK_FALSE(d4);
  CHECK(d4.failure == DivisionResult::Failure::Entirety);
  CHECK_THROWS_AS(h_divides(HElement(), H(Z)), Error);
}

TEST_CASE("algebraic_zero_divisor") {
  auto z1 = algebraic_zero_divisor(H(S - C(1)));
  REQUIRE(z1.size() == 1);
  CHECK(z1[0].factor == P({0, 1}));
  CHECK(z1[0].multiplicity == 1);
  CHECK(is_entire(S - C(1), P({0, 1})).entire);
  auto z2 = algebraic_zero_divisor(H(Z * (S - C(1))));
  REQUIRE(z2.size() == 1);
  CHECK(z2[0].multiplicity == 2);
  CHECK(algebraic_zero_divisor(H(S - C(2))).empty());
  for (auto psi : {P({0, 1}), P({-1, 1}), P({1, 1}), P({-2, 1}), P({1, 0, 1}), P({-2, 0, 1}), P({1, 1, 1})})
    CHECK_FALSE(is_entire(S - C(2), psi).entire);
  auto z3 = algebraic_zero_divisor(H(ep_pow(Z * Z + C(1), 2) * (S + Z)));
  REQUIRE(z3.size() == 1);
  CHECK(z3[0].factor == P({1, 0, 1}));
  CHECK(z3[0].multiplicity == 2);
}

TEST_CASE("h_gcd examples") {
  HElement g1 = h_gcd(H(S - C(1)), H(Z));
  CHECK(g1.same_up_to_unit(H(Z)));
  CHECK(h_divides(g1, H(S - C(1))));
  CHECK(h_divides(g1, H(Z)));
  CHECK_FALSE(h_divides(H(Z * Z), H(S - C(1))));
  CHECK(h_gcd(H(S - C(1)), H(S + C(1))).is_unit());
  HElement g3 = h_gcd(H(Z * (S - C(1))), H(ep_pow(S, 2) - C(1)));
  CHECK(g3.same_up_to_unit(H(S - C(1))));
  CHECK_THROWS_AS(h_gcd(HElement(), HElement()), Error);
}

TEST_CASE("h_bezout examples") {
  auto b1 = h_bezout(H(S - C(1)), H(S + C(1)));
  CHECK(b1.g.is_unit());
  CHECK(b1.u * H(S - C(1)) + b1.v * H(S + C(1)) == b1.g);
  CHECK(b1.g == HElement(GaussianRational(1)));
  CHECK(b1.u == HElement(GaussianRational::from_fraction(-1, 2)));
  CHECK(b1.v == HElement(GaussianRational::from_fraction(1, 2)));
  auto b2 = h_bezout(H(S - C(1)), H(Z));
  CHECK(b2.g.same_up_to_unit(H(Z)));
  CHECK(b2.u * H(S - C(1)) + b2.v * H(Z) == b2.g);
  auto b3 = h_bezout(H(Z), H(S - C(1)));
  CHECK(b3.u * H(Z) + b3.v * H(S - C(1)) == b3.g);
}

TEST_CASE("h_bezout needs the jet correction") {
  // Extended Euclid gives v = 1/(z-1), which is not entire; W = s^-1 repairs
  // it since (s + z - 1)* equals e at z = 1.
  HElement a = H(S + Z - C(1));
  HElement b = H(Z - C(1));
  BezoutOptions off;
  off.jet_correction = false;
  CHECK_THROWS_AS(h_bezout(a, b, off), Error);
  auto r = h_bezout(a, b);
  CHECK(r.tier == 2);
  CHECK(r.g.is_unit());
  CHECK(r.u * a + r.v * b == r.g);
}

TEST_CASE("h_bezout refuses when the unit value is not a Laurent monomial") {
  // u*(-1) would have to be -e/(1+e).
  CHECK_THROWS_AS(h_bezout(H(Z * S - C(1)), H(Z + C(1))), Error);
}

TEST_CASE("h_bezout refuses pairs without Q(i) cofactors") {
  try {
    h_bezout(H(S - C(2)), H(Z - C(1)));
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoRationalCofactors);
  }
}

TEST_CASE("property: is_entire agrees with circle growth") {
  std::mt19937 rng(5);
  int accepted = 0, refused = 0;
  for (int t = 0; t < 40; ++t) {
    ExpPoly num = random_ep(rng, -1, 1, 2, false);
    if (num.is_zero()) continue;
    std::uniform_int_distribution<int> pick(0, 2);
    PolyC den = poly_pow(std::vector<PolyC>{P({0, 1}), P({-1, 1}), P({1, 0, 1})}[pick(rng)], 1 + pick(rng) % 2);
    // Make some instances entire by multiplying in the denominator.
    if (t % 2) num = num * ExpPoly(den);
    auto r = is_entire(num, den);
    for (Complex root : numeric_roots(den)) {
      double m1 = max_on_circle(num, den, root, 1e-2);
      double m3 = max_on_circle(num, den, root, 1e-4);
      if (r.entire) {
        CHECK(m3 <= 10 * m1 + 1e-6);
      }
    }
    if (r.entire) {
      ++accepted;
    } else {
      ++refused;
      REQUIRE(r.witness);
      int deficit = r.witness->required - r.witness->actual;
      for (Complex root : numeric_roots(r.witness->factor)) {
        double m1 = max_on_circle(num, den, root, 1e-2);
        double m2 = max_on_circle(num, den, root, 1e-3);
        // Growth of about 10^deficit per decade; a multiple root of den
        // shared with another factor can only raise it.
        CHECK(m2 / m1 >= std::pow(10.0, deficit) / 10);
      }
    }
  }
  CHECK(accepted > 5);
  CHECK(refused > 5);
}

TEST_CASE("property: gcd and divisibility") {
  std::mt19937 rng(6);
  std::vector<ExpPoly> pieces = {S - C(1), Z, S + C(1), Z - C(1), Z * S - C(1), S - C(2), S - C(1) - Z};
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pieces.size()) - 1);
  for (int t = 0; t < 25; ++t) {
    ExpPoly d = pieces[pick(rng)];
    ExpPoly x = pieces[pick(rng)] * pieces[pick(rng)];
    ExpPoly y = pieces[pick(rng)];
    HElement a = H(d * x), b = H(d * y);
    HElement g = h_gcd(a, b);
    auto qa = h_divides(g, a), qb = h_divides(g, b);
    REQUIRE(qa);
    REQUIRE(qb);
    CHECK(*qa.quotient * g == a);
    CHECK(h_gcd(*qa.quotient, *qb.quotient).is_unit());
    CHECK(h_divides(H(d), g));
    CHECK(h_gcd(b, a).same_up_to_unit(g));
    HElement c = H(pieces[pick(rng)] * pieces[pick(rng)]);
    CHECK(h_gcd(h_gcd(a, b), c).same_up_to_unit(h_gcd(a, h_gcd(b, c))));
  }
}

TEST_CASE("numeric evaluation near denominator roots") {
  HElement q = H(S - C(1), P({0, 1}));
  CHECK(std::abs(q.eval(0.0) - 1.0) < 1e-12);
  CHECK(std::abs(q.eval(1e-9) - 1.0) < 1e-8);
  CHECK(std::abs(q.eval(2.0) - (std::exp(2.0) - 1) / 2) < 1e-12);
  CHECK(std::abs(q.eval_derivative(0.0) - 0.5) < 1e-10);
}
