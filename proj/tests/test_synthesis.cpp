#include "ddelta/synthesis.hpp"

#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"

using namespace ddelta;
using namespace testing_util;

namespace {

HElement H(const ExpPoly& n, const PolyC& d = P({1})) { return h_normalize(n, d); }
HMatrix M(std::vector<std::vector<HElement>> e) { return HMatrix(std::move(e)); }

double omega_by_bisection() {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double distance(const ExpSolution& a, const ExpSolution& b) {
  return (a + Complex(-1, 0) * b).sup_norm(0, 1);
}

FormalSeries series(std::initializer_list<long> c) {
  FormalSeries f;
  for (long x : c) f.coeffs.emplace_back(x);
  return f;
}

ExpSolution random_solution(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Mode> modes;
  for (int k = 0; k < 2; ++k) {
    Mode m{Complex(u(rng), 3 * u(rng)), {}};
    for (int j = 0; j < 2; ++j) m.poly.emplace_back(u(rng), u(rng));
    modes.push_back(m);
  }
  return ExpSolution(modes);
}

}  // namespace

TEST_CASE("apply_op examples") {
  ExpSolution wave = ExpSolution::monomial_mode(Complex(0, 2 * M_PI));
  CHECK(apply_op(H(S - C(1)), wave).sup_norm(0, 1) < 1e-12);

  const Complex alpha(0.3, 1.7);
  auto zr = apply_op(H(Z), ExpSolution::monomial_mode(alpha, 1));
  CHECK(distance(zr, ExpSolution({{alpha, {1.0, alpha}}})) < 1e-12);

  // (s-1)/z on e^{ax}: g' = e^{ax} gives g = e^{ax}/a, then shift-subtract.
  auto u = ExpSolution::monomial_mode(alpha);
  auto r = apply_op(H(S - C(1), P({0, 1})), u);
  CHECK(distance(r, ((std::exp(alpha) - 1.0) / alpha) * u) < 1e-12);
  CHECK(distance(apply_op(H(Z), r), apply_op(H(S - C(1)), u)) < 1e-12);

  CHECK_THROWS_AS(apply_op(H(S - C(1), P({0, 1})), ExpSolution::monomial_mode(0.0)), Error);
  // The entire route handles the removable point: q*(0) = 1.
  CHECK(distance(apply_entire(H(S - C(1), P({0, 1})), ExpSolution::monomial_mode(0.0)),
                 ExpSolution::monomial_mode(0.0)) < 1e-12);
}

TEST_CASE("property: apply_op linearity and composition") {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    ExpPoly a = random_ep(rng, -1, 1, 2), b = random_ep(rng, 0, 1, 1);
    if (a.is_zero() || b.is_zero()) continue;
    HElement q1 = H(a), q2 = H(b);
    ExpSolution u = random_solution(rng), v = random_solution(rng);
    Complex c(0.7, -0.4);
    CHECK(distance(apply_op(q1, u + c * v), apply_op(q1, u) + c * apply_op(q1, v)) < 1e-10);
    CHECK(distance(apply_op(q1 * q2, u), apply_op(q1, apply_op(q2, u))) < 1e-9);
    CHECK(distance(apply_op(q1, u), apply_entire(q1, u)) < 1e-9);
  }
  // Composition through a denominator.
  HElement q = H(S - C(1), P({0, 1}));
  ExpSolution u({{Complex(0.5, 2), {1.0, 0.5}}});
  CHECK(distance(apply_op(H(Z) * q, u), apply_op(H(S - C(1)), u)) < 1e-10);
  CHECK(distance(apply_entire(q, u), apply_op(q, u)) < 1e-10);
}

TEST_CASE("solution_basis_single examples") {
  auto b = solution_basis_single(H(S - C(1)), Rect(-1, 1, -7, 7));
  REQUIRE(b.size() == 3);
  for (int k = -1; k <= 1; ++k) {
    const auto& m = b[static_cast<size_t>(k + 1)].modes();
    REQUIRE(m.size() == 1);
    CHECK(std::abs(m[0].alpha - Complex(0, 2 * M_PI * k)) < 1e-9);
  }
  auto d = solution_basis_single(H(ep_pow(S - C(1), 2)), Rect(-1, 1, -1, 1));
  REQUIRE(d.size() == 2);
  CHECK(d[0].modes()[0].poly.size() == 1);
  CHECK(d[1].modes()[0].poly.size() == 2);
  auto w = solution_basis_single(H(Z * S - C(1)), Rect(0, 1, -1, 1));
  REQUIRE(w.size() == 1);
  const double om = omega_by_bisection();
  CHECK(std::abs(w[0].modes()[0].alpha - om) < 1e-9);
  // y'(x+1) = y(x)
  for (double x : {0.0, 0.3, 1.7}) CHECK(std::abs(w[0].derivative(x + 1, 1) - w[0](x)) < 1e-9);
}

TEST_CASE("property: zeros and solutions correspond") {
  std::vector<HElement> qs = {H(S - C(1) - Z), H(ep_pow(S, 2) - Z), H(Z * S - C(1)), H(ep_pow(S - C(1), 2), P({0, 1}))};
  for (const auto& q : qs) {
    Rect r(-2.01, 2.03, -6.97, 7.03);
    for (const auto& c : find_zeros(q, r)) {
      for (int j = 0; j < c.multiplicity; ++j)
        CHECK(apply_entire(q, ExpSolution::monomial_mode(c.center, j)).sup_norm(0, 1) < 1e-6);
      // One power past the multiplicity is not annihilated.
      CHECK(apply_entire(q, ExpSolution::monomial_mode(c.center, c.multiplicity)).sup_norm(0, 1) > 1e-3);
    }
    // A point that is not a zero gives no solution.
    CHECK(apply_entire(q, ExpSolution::monomial_mode(Complex(0.37, 0.21))).sup_norm(0, 1) > 1e-3);
  }
}

TEST_CASE("solution_basis_system examples") {
  Rect r(-1, 1, -1, 1);
  auto col = solution_basis_system(M({{H(S - C(1))}, {H(Z)}}), r);
  REQUIRE(col.size() == 1);
  CHECK(std::abs(col[0].components[0](0.4) - col[0].components[0](0.9)) < 1e-12);
  CHECK(std::abs(col[0].components[0](0.4)) > 0.1);

  auto diag = solution_basis_system(M({{H(S - C(1)), HElement()}, {HElement(), H(Z)}}), r);
  REQUIRE(diag.size() == 2);
  for (const auto& v : diag) {
    int nonzero = 0;
    for (const auto& c : v.components) nonzero += c.sup_norm(0, 1) > 1e-9;
    CHECK(nonzero == 1);
  }

  CHECK(solution_basis_system(M({{H(C(1))}}), r).empty());

  // A zero column contributes a free generator.
  auto fr = solution_basis_system(M({{H(S - C(1)), HElement()}}), Rect(-1, 1, -1, 1));
  REQUIRE(fr.size() == 2);
  CHECK(std::count_if(fr.begin(), fr.end(), [](const VectorSolution& v) { return v.free; }) == 1);
}

TEST_CASE("retarded_form") {
  auto f = retarded_form(H(Z * S - C(1)));
  CHECK(f.order == 1);
  CHECK(f.max_delay == 1);
  CHECK_THROWS_AS(retarded_form(H(Z * S - Z)), Error);  // neutral
  CHECK_THROWS_AS(retarded_form(H(S - Z)), Error);      // advanced
  CHECK(retarded_form(H(S - C(2))).order == 0);
  try {
    retarded_form(H(S - Z * Z));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotRetarded);
  }
}

TEST_CASE("method_of_steps oracle") {
  const double om = omega_by_bisection();
  ExpSolution mode = ExpSolution::monomial_mode(om);
  auto tr = method_of_steps(H(Z * S - C(1)), mode, 8.0);
  double err = 0;
  for (size_t i = 0; i < tr.values.size(); ++i) err = std::max(err, std::abs(tr.values[i] - mode(tr.x(i))));
  CHECK(err < 1e-6);
  CHECK(std::abs(tr.x(tr.values.size() - 1) - 8.0) < 1e-12);

  auto dbl = method_of_steps(H(S - C(2)), ExpSolution::monomial_mode(0.0), 6.0);
  for (int n = 0; n <= 6; ++n) CHECK(std::abs(dbl.values[static_cast<size_t>(n * 256)] - std::pow(2.0, n)) < 1e-12);

  auto zero = method_of_steps(H(Z * S - C(1)), ExpSolution(), 4.0);
  for (auto v : zero.values) CHECK(v == Complex(0, 0));

  // Complex mode of a second-order equation: y''(x+1) + y(x) = 0 via (z^2 s + 1).
  auto zs = find_zeros(H(Z * Z * S + C(1)), Rect(-3.01, 3.03, -3.97, 4.03));
  REQUIRE(!zs.empty());
  for (const auto& c : zs) {
    ExpSolution m = ExpSolution::monomial_mode(c.center);
    auto t2 = method_of_steps(H(Z * Z * S + C(1)), m, 8.0);
    double e2 = 0;
    for (size_t i = 0; i < t2.values.size(); ++i)
      e2 = std::max(e2, std::abs(t2.values[i] - m(t2.x(i))) / std::exp(std::abs(c.center.real()) * t2.x(i)));
    CHECK(e2 < 1e-6);
  }
  CHECK_THROWS_AS(method_of_steps(H(Z * S - Z), mode, 2.0), Error);
}

TEST_CASE("spectral_project") {
  const double om = omega_by_bisection();
  ExpSolution mode = ExpSolution::monomial_mode(om);
  auto tr = method_of_steps(H(Z * S - C(1)), mode, 8.0);
  auto p = spectral_project(tr, {mode});
  CHECK(std::abs(p.coefficients[0] - 1.0) < 1e-6);
  CHECK(p.residual < 1e-6);
  CHECK_FALSE(p.ill_conditioned);

  auto zero = method_of_steps(H(Z * S - C(1)), ExpSolution(), 8.0);
  auto pz = spectral_project(zero, {mode, ExpSolution::monomial_mode(Complex(-1, 3))});
  for (auto c : pz.coefficients) CHECK(std::abs(c) < 1e-14);

  auto dup = spectral_project(tr, {mode, mode});
  CHECK(dup.ill_conditioned);
  CHECK_THROWS_AS(spectral_project(tr, {}), Error);
}

TEST_CASE("property: projection residual decreases with the number of dominant modes") {
  HElement q = H(Z * S - C(1));
  auto zs = find_zeros(q, Rect(-4.01, 1.03, -40.03, 40.07));
  std::sort(zs.begin(), zs.end(), [](const ZeroCluster& a, const ZeroCluster& b) {
    return a.center.real() > b.center.real() ||
           (a.center.real() == b.center.real() && a.center.imag() > b.center.imag());
  });
  ExpSolution init({{0.0, {1.0, -0.5, 0.25}}});
  auto tr = method_of_steps(q, init, 8.0);
  std::vector<double> res;
  std::vector<ExpSolution> basis;
  // Conjugate pairs enter together so the fit stays real.
  size_t i = 0;
  while (basis.size() < 6 && i < zs.size()) {
    basis.push_back(ExpSolution::monomial_mode(zs[i].center));
    ++i;
    res.push_back(spectral_project(tr, basis, 2.0).residual);
  }
  REQUIRE(res.size() == 6);
  for (size_t k = 1; k < res.size(); ++k) CHECK(res[k] <= res[k - 1] * 1.05);
  CHECK(res.back() < res.front());
}

TEST_CASE("pairing") {
  CHECK(pairing(P({0, 1}), series({0, 1})) == GaussianRational(1));
  CHECK(pairing(P({0, 0, 1}), series({0, 0, 1})) == GaussianRational(2));
  auto r = pairing_adjoint_check(P({0, 1}), series({0, 1}));
  CHECK(r.shift_lhs == GaussianRational(1));
  CHECK(r.shift_rhs == GaussianRational(1));
  CHECK(r.derivative_ok);
  CHECK(r.shift_ok);
  CHECK_THROWS_AS(pairing(P({0, 0, 1}), series({0, 1})), Error);
  CHECK(pairing(PolyC(), series({})) == GaussianRational(0));
}

TEST_CASE("property: pairing adjoint identities") {
  std::mt19937 rng(5);
  for (int t = 0; t < 50; ++t) {
    PolyC p = random_poly(rng, 5);
    FormalSeries f;
    for (int n = 0; n < 8; ++n) f.coeffs.push_back(random_gr(rng));
    auto r = pairing_adjoint_check(p, f);
    CHECK(r.derivative_ok);
    CHECK(r.shift_ok);
  }
}
