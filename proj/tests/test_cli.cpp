#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ddelta/cli.hpp"
#include "ddelta/parse.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ddelta;
using namespace testing_util;

namespace {

HElement H(const ExpPoly& n, const PolyC& d = P({1})) { return h_normalize(n, d); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;
}

std::string error_path(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    std::string w = e.what();
    return w.substr(0, w.find(':'));
  }
  return "";
}

}  // namespace

TEST_CASE("parse_operator examples") {
  CHECK(parse_operator("s^2 - 2*s + 1") == H(ep_pow(S - C(1), 2)));
  CHECK(parse_operator("(s-1)/z") == H(S - C(1), P({0, 1})));
  CHECK(kind_of([] { parse_operator("(s-1)/z^2"); }) == ErrorKind::NotEntire);
  CHECK(parse_operator("(s-1-z)/z^2") == H(S - C(1) - Z, P({0, 0, 1})));
  CHECK(kind_of([] { parse_operator("1/(s+1)"); }) == ErrorKind::NonPolynomialDenominator);
  CHECK(kind_of([] { parse_operator("s + * 2"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_operator("(s"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_operator("s/0"); }) == ErrorKind::ZeroDenominator);
  CHECK(kind_of([] { parse_operator("w"); }) == ErrorKind::SyntaxError);
  try {
    parse_operator("s + $");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("column 5") != std::string::npos);
  }
}

TEST_CASE("grammar details") {
  // ^ binds tighter than unary minus, which binds tighter than *.
  CHECK(parse_operator("-z^2") == H(ExpPoly() - Z * Z));
  CHECK(parse_operator("2*-z") == H(ExpPoly() - C(2) * Z));
  CHECK(parse_operator("s^-1") == H(ExpPoly::sigma(-1)));
  CHECK(parse_operator("s^(-2)") == H(ExpPoly::sigma(-2)));
  CHECK(parse_operator("1/s") == H(ExpPoly::sigma(-1)));
  CHECK(parse_operator("z*s") == parse_operator("s*z"));
  CHECK(parse_operator("1/2 + 3/4i") ==
        HElement(GaussianRational::from_fraction(1, 2) + GaussianRational::from_fraction(3, 4) * GaussianRational::i()));
  CHECK(parse_operator("0.25*z") == H(ExpPoly(PolyC({GaussianRational(0), GaussianRational::from_fraction(1, 4)}))));
  CHECK(parse_operator("z^2/3") == H(ExpPoly(PolyC({GaussianRational(0), GaussianRational(0), GaussianRational::from_fraction(1, 3)}))));
  CHECK(parse_operator("2i*s") == H(ExpPoly::term(1, PolyC(GaussianRational(2) * GaussianRational::i()))));
  CHECK(parse_operator("i") == HElement(GaussianRational::i()));
}

TEST_CASE("matrices and hefer input") {
  HMatrix m = parse_matrix("[[s-1],[z]]");
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 1);
  CHECK(m(1, 0) == H(Z));
  CHECK(kind_of([] { parse_matrix("[[s, 1], [z]]"); }) == ErrorKind::SyntaxError);
  CHECK(parse_matrix(print(parse_matrix("[[s, 1], [z, s^2 - 1]]"))) == parse_matrix("[[s,1],[z,s^2-1]]"));
  HeferInput hi = parse_hefer_input("s*z2^3");
  CHECK(hi.q == H(S));
  CHECK(hi.alpha == 3);
  CHECK(kind_of([] { parse_operator("z2"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_hefer_input("s*z2 + 1"); }) == ErrorKind::SyntaxError);
}

TEST_CASE("property: parse . print is the identity on normal forms") {
  std::mt19937 rng(21);
  std::vector<PolyC> dens = {P({1}), P({0, 1}), P({0, 0, 1})};
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    ExpPoly e = random_ep(rng, -2, 2, 3);
    if (e.is_zero()) continue;
    HElement h;
    try {
      h = h_normalize(e * Z * Z, dens[static_cast<size_t>(t % 3)]);
    } catch (const Error&) {
      continue;
    }
    std::string text = print(h);
    HElement back = parse_operator(text);
    CHECK(back == h);
    CHECK(print(back) == text);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("JSON round trips") {
  HElement sq = H(S * S - C(1));
  CHECK(helement_from_json(to_json(sq)) == sq);
  CHECK(exppoly_from_json(to_json(S * S - C(1))) == S * S - C(1));
  HMatrix m = parse_matrix("[[s-1, (s-1)/z], [1/2 - 3/4i, z*s^-1]]");
  CHECK(hmatrix_from_json(to_json(m)) == m);
  CHECK(hmatrix_from_json(parse_json(to_json(m).dump())) == m);
  GaussianRational g = GaussianRational::from_fraction(-7, 3) + GaussianRational::from_fraction(5, 11) * GaussianRational::i();
  CHECK(gaussian_from_json(to_json(g)) == g);

  ExpSolution s({Mode{Complex(0.1, 1.0 / 3.0), {Complex(1e-17, -2.5), Complex(0.7, 0.0)}}});
  ExpSolution back = expsolution_from_json(parse_json(to_json(s).dump()));
  REQUIRE(back.modes().size() == 1);
  CHECK(back.modes()[0].alpha == s.modes()[0].alpha);
  CHECK(back.modes()[0].poly == s.modes()[0].poly);

  std::mt19937 rng(4);
  for (int t = 0; t < 50; ++t) {
    ExpPoly e = random_ep(rng, -2, 2, 3);
    CHECK(exppoly_from_json(parse_json(to_json(e).dump())) == e);
  }
}

TEST_CASE("SchemaViolation names the path") {
  HMatrix m = parse_matrix("[[s-1], [z]]");
  Json j = to_json(m);
  j["entries"][1][0]["num"][0]["sigma"] = "x";
  CHECK(kind_of([&] { hmatrix_from_json(j); }) == ErrorKind::SchemaViolation);
  CHECK(error_path([&] { hmatrix_from_json(j); }) == "$.entries[1][0].num[0].sigma");
  Json k = to_json(m);
  k["entries"][0].erase(0);
  CHECK(error_path([&] { hmatrix_from_json(k); }) == "$.entries[0]");
  CHECK(kind_of([] { parse_json("{\"rows\": 2, \"co"); }) == ErrorKind::SchemaViolation);
  CHECK(error_path([] { parse_json("[1, 2"); }) == "$");
  CHECK(error_path([] { config_from_json(parse_json("{\"grid\": 8}")); }) == "$.grid");
  CHECK(error_path([] { config_from_json(parse_json("{\"tol\": -1}")); }) == "$.tol");
  CHECK(error_path([] { testfunction_from_json(parse_json("{\"center\": [0, 0]}")); }) == "$");
  CHECK(error_path([] { testfunction_from_json(parse_json("{\"radius\": 1, \"poly\": [[1, 2, 3]]}")); }) ==
        "$.poly[0]");
}

TEST_CASE("config") {
  Config c = config_from_json(parse_json(R"({"tol": 1e-6, "rect": [-1, 1, -2, 2], "format": "text", "seed": 9})"));
  CHECK(c.tol == 1e-6);
  CHECK(c.rect.im_max == 2);
  CHECK(c.format == "text");
  CHECK(c.seed == 9);
  CHECK(c.grid == 512);
  CHECK(config_from_json(to_json(c)).rect.re_min == -1);
  CHECK(kind_of([] { config_from_json(parse_json(R"({"colour": 1})")); }) == ErrorKind::SchemaViolation);

  const char* path = "test_cli_config.json";
  {
    std::ofstream out(path);
    out << R"({"grid": 64, "lambda_schedule": [0.1, 0.05]})";
  }
  setenv("DDELTA_CONFIG", path, 1);
  Config e = load_config();
  CHECK(e.grid == 64);
  CHECK(e.lambda_schedule.size() == 2);
  unsetenv("DDELTA_CONFIG");
  CHECK(load_config().grid == 512);
}

TEST_CASE("dispatch") {
  Config c;
  auto run = [&](const std::string& name, const Json& p) { return run_subcommand(name, c, p); };
  CHECK(run("gcd", {{"a", "s-1"}, {"b", "z"}})["gcd"] == "z");
  Json sm = run("smith", {{"matrix", "[[s-1],[z]]"}});
  CHECK(sm["diagonal"][0] == "z");
  CHECK(sm["transcript"]["VPW_equals_D"] == true);
  CHECK(sm["transcript"]["V_unimodular"] == true);
  CHECK(hmatrix_from_json(sm["D"]) == parse_matrix("[[z],[0]]"));

  Json r = run("residue", {{"expr", "s-1"}, {"support", 9.0}});
  TestFunction phi = bump(0.0, 9.0);
  Complex expected = M_PI * (phi(0.0) + phi(Complex(0, 2 * M_PI)) + phi(Complex(0, -2 * M_PI)));
  CHECK(std::abs(complex_from_json(r["value"]) - expected) < 1e-3 * std::abs(expected));

  Json m = run("member", {{"h", "z*(s+1)"}, {"gens", "s-1; z"}});
  CHECK(m["member"] == true);
  CHECK(m["cofactors"][1]["expr"] == "s + 1");
  CHECK(m["identity"]["verified"] == true);
  CHECK(run("member", {{"h", "s"}, {"gens", Json::array({"z"})}})["member"] == false);

  CHECK(run("divides", {{"a", "z"}, {"b", "s-1"}})["quotient"] == "(s - 1)/z");
  CHECK(run("divides", {{"a", "z^2"}, {"b", "s-1"}})["failure"] == "entirety");
  CHECK(run("bezout", {{"a", "s-1"}, {"b", "s+1"}})["verified"] == true);
  CHECK(run("normalize", {{"expr", "2*s^2 - 2"}})["expr"] == "2*s^2 - 2");
  CHECK(run("hefer", {{"q", "s"}, {"alpha", 1}})["identity_ok"] == true);

  Config narrow;
  narrow.rect = Rect(-1, 1, -20, 20);
  Json z = run_subcommand("zeros", narrow, {{"expr", "s-1"}});
  CHECK(z["clusters"].size() == 7);
  Json sol = run_subcommand("solve", narrow, {{"expr", "s-1"}});
  CHECK(sol["basis"].size() == 7);
  Json sys = run_subcommand("solve", narrow, {{"matrix", "[[s-1, z]]"}});
  CHECK(sys["basis"].size() >= 1);

  Json sim = run("simulate", {{"expr", "z*s-1"}, {"mode", {0.5671432904097838, 0.0}}, {"horizon", 1.0}});
  CHECK(sim["trajectory"]["values"].size() == 257);
  Json pr = run("project", {{"expr", "z*s-1"}, {"modes", 3}});
  CHECK(pr["coefficients"].size() == 3);

  CHECK(kind_of([&] { run("nope", Json::object()); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { run("gcd", {{"a", "s"}}); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { run("zeros", {{"expr", 5}}); }) == ErrorKind::SchemaViolation);
  CHECK(subcommands().size() == 14);
}

TEST_CASE("dispatch exit codes and determinism") {
  Config c;
  std::ostringstream out1, out2, err;
  CHECK(dispatch("member", c, {{"h", "1"}, {"gens", "s-1;s+1"}}, out1, err) == 0);
  CHECK(dispatch("member", c, {{"h", "1"}, {"gens", "s-1;s+1"}}, out2, err) == 0);
  CHECK(out1.str() == out2.str());
  CHECK(err.str().empty());

  std::ostringstream o, e;
  CHECK(dispatch("normalize", c, {{"expr", "(s-1)/z^2"}}, o, e) == static_cast<int>(ErrorKind::NotEntire));
  CHECK(parse_json(o.str())["error"] == "NotEntire");
  CHECK(!e.str().empty());

  std::ostringstream o2, e2;
  CHECK(dispatch("normalize", c, {{"expr", "s + "}}, o2, e2) == static_cast<int>(ErrorKind::SyntaxError));

  Config text;
  text.format = "text";
  std::ostringstream t, te;
  CHECK(dispatch("gcd", text, {{"a", "s-1"}, {"b", "z"}}, t, te) == 0);
  CHECK(t.str().find("gcd: z\n") != std::string::npos);

  std::ostringstream csv, ce;
  CHECK(dispatch("simulate", c, {{"expr", "z*s-1"}, {"mode", {0.0, 0.0}}, {"horizon", 1.0}, {"csv", true}}, csv, ce) ==
        0);
  CHECK(csv.str().rfind("x,re,im\n0,1,0\n", 0) == 0);
}
