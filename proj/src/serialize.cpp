#include "ddelta/serialize.hpp"

#include "ddelta/parse.hpp"

namespace ddelta {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::SchemaViolation, path + ": " + msg);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string sub(const std::string& path, const char* key) { return path + "." + key; }
std::string sub(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  return j;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

Json complex_list(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (Complex c : v) out.push_back(to_json(c));
  return out;
}

}  // namespace

Json to_json(const GaussianRational& v) {
  std::string s = v.to_string();
  if (s.size() > 1 && s.front() == '(') s = s.substr(1, s.size() - 2);
  return s;
}

Json to_json(Complex v) { return Json::array({v.real(), v.imag()}); }

Json to_json(const PolyC& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

Json to_json(const ExpPoly& e) {
  Json out = Json::array();
  for (const auto& [k, p] : e.terms()) out.push_back({{"sigma", k}, {"poly", to_json(p)}});
  return out;
}

Json to_json(const HElement& h) {
  return {{"expr", h.to_string()},
          {"num", to_json(h.num())},
          {"den", to_json(h.den())},
          {"unit", {{"c", to_json(h.unit().c)}, {"k", h.unit().k}}}};
}

Json to_json(const HMatrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    entries.push_back(row);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json to_json(const ExpSolution& s) {
  Json modes = Json::array();
  for (const auto& m : s.modes()) modes.push_back({{"alpha", to_json(m.alpha)}, {"poly", complex_list(m.poly)}});
  return {{"modes", modes}};
}

Json to_json(const ZeroCluster& c) {
  return {{"center", to_json(c.center)}, {"multiplicity", c.multiplicity}, {"radius", c.radius}};
}

Json to_json(const Trajectory& t) {
  return {{"x0", t.x0}, {"step", t.step}, {"values", complex_list(t.values)}};
}

Json to_json(const Projection& p) {
  return {{"coefficients", complex_list(p.coefficients)},
          {"residual", p.residual},
          {"condition", p.condition},
          {"ill_conditioned", p.ill_conditioned}};
}

Json to_json(const CurrentEval& e) {
  return {{"value", to_json(e.value)},
          {"lambda_schedule", e.lambda_schedule},
          {"samples", complex_list(e.samples)},
          {"residual", e.residual},
          {"normalization", e.normalization}};
}

Json to_json(const GrowthCert& g) {
  return {{"C", g.C}, {"M", g.M}, {"N", g.N}, {"denom_witness", to_json(g.denom_witness)},
          {"samples", g.samples}, {"worst_ratio", g.worst_ratio}};
}

Json to_json(const HeferPair& p) {
  return {{"h1", p.h1.to_string()}, {"h2", p.h2.to_string()}, {"identity_ok", p.identity_ok},
          {"transcript", p.transcript}};
}

Json to_json(const MembershipResult& m, const HElement& h, const std::vector<HElement>& gens) {
  Json out = {{"member", m.member}, {"gcd", to_json(m.gcd)}};
  if (!m.member) return out;
  Json cof = Json::array(), growth = Json::array(), identity = Json::array();
  for (size_t k = 0; k < m.cofactors.size(); ++k) {
    cof.push_back(to_json(m.cofactors[k]));
    growth.push_back(to_json(m.growth[k]));
    identity.push_back({{"cofactor", m.cofactors[k].to_string()},
                        {"generator", gens[k].to_string()},
                        {"product", (m.cofactors[k] * gens[k]).to_string()}});
  }
  out["cofactors"] = cof;
  out["growth"] = growth;
  out["identity"] = {{"terms", identity}, {"sum", h.to_string()}, {"verified", m.identity_verified}};
  return out;
}

Json to_json(const SmithDecomposition& d, const HMatrix& p) {
  HMatrix vp = mat_mul(d.V, p);
  HMatrix vpw = mat_mul(vp, d.W);
  UnimodularResult uv = is_unimodular(d.V), uw = is_unimodular(d.W);
  Json diag = Json::array();
  for (int k = 0; k < std::min(d.D.rows(), d.D.cols()); ++k) diag.push_back(d.D(k, k).to_string());
  return {{"V", to_json(d.V)},
          {"D", to_json(d.D)},
          {"W", to_json(d.W)},
          {"rank", d.rank},
          {"diagonal", diag},
          {"transcript",
           {{"P", print(p)},
            {"VP", print(vp)},
            {"VPW", print(vpw)},
            {"VPW_equals_D", vpw == d.D},
            {"det_V", uv.det.to_string()},
            {"det_W", uw.det.to_string()},
            {"V_unimodular", uv.unimodular},
            {"W_unimodular", uw.unimodular}}}};
}

Json to_json(const EntiretyCertificate& c) {
  Json out = Json::array();
  for (const auto& e : c.entries) {
    Json d = Json::array();
    for (const auto& lvl : e.divisible) d.push_back(lvl);
    out.push_back({{"factor", e.factor.to_string()}, {"multiplicity", e.multiplicity}, {"method", e.method},
                   {"order", e.order}, {"divisible", d}});
  }
  return out;
}

GaussianRational gaussian_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return GaussianRational(j.get<long>());
  if (!j.is_string()) schema(path, "expected an exact number string");
  try {
    return parse_gaussian(j.get<std::string>());
  } catch (const Error& e) {
    schema(path, e.what());
  }
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) schema(path, "expected [re, im]");
  return {number(j[0], sub(path, size_t{0})), number(j[1], sub(path, size_t{1}))};
}

PolyC poly_from_json(const Json& j, const std::string& path) {
  std::vector<GaussianRational> c;
  const Json& a = array(j, path);
  for (size_t k = 0; k < a.size(); ++k) c.push_back(gaussian_from_json(a[k], sub(path, k)));
  return PolyC(std::move(c));
}

ExpPoly exppoly_from_json(const Json& j, const std::string& path) {
  ExpPoly out;
  const Json& a = array(j, path);
  for (size_t k = 0; k < a.size(); ++k) {
    std::string p = sub(path, k);
    int s = integer(field(a[k], "sigma", p), sub(p, "sigma"));
    out += ExpPoly::term(s, poly_from_json(field(a[k], "poly", p), sub(p, "poly")));
  }
  return out;
}

HElement helement_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_operator(j.get<std::string>());
    ExpPoly num = exppoly_from_json(field(j, "num", path), sub(path, "num"));
    PolyC den = poly_from_json(field(j, "den", path), sub(path, "den"));
    GaussianRational c(1);
    int k = 0;
    if (j.contains("unit")) {
      const Json& u = j["unit"];
      c = gaussian_from_json(field(u, "c", sub(path, "unit")), sub(sub(path, "unit"), "c"));
      k = integer(field(u, "k", sub(path, "unit")), sub(sub(path, "unit"), "k"));
    }
    return h_normalize(ExpPoly::term(k, PolyC(c)) * num, den);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaViolation) throw;
    schema(path, e.what());
  }
}

HMatrix hmatrix_from_json(const Json& j, const std::string& path) {
  int r = integer(field(j, "rows", path), sub(path, "rows"));
  int c = integer(field(j, "cols", path), sub(path, "cols"));
  const Json& e = array(field(j, "entries", path), sub(path, "entries"));
  if (r < 0 || c < 0 || e.size() != static_cast<size_t>(r)) schema(sub(path, "entries"), "row count differs from rows");
  std::vector<std::vector<HElement>> rows;
  for (size_t i = 0; i < e.size(); ++i) {
    std::string ri = sub(sub(path, "entries"), i);
    const Json& row = array(e[i], ri);
    if (row.size() != static_cast<size_t>(c)) schema(ri, "column count differs from cols");
    std::vector<HElement> out;
    for (size_t k = 0; k < row.size(); ++k) out.push_back(helement_from_json(row[k], sub(ri, k)));
    rows.push_back(std::move(out));
  }
  if (r == 0) return HMatrix(0, c);
  return HMatrix(std::move(rows));
}

ExpSolution expsolution_from_json(const Json& j, const std::string& path) {
  const Json& modes = array(field(j, "modes", path), sub(path, "modes"));
  std::vector<Mode> out;
  for (size_t k = 0; k < modes.size(); ++k) {
    std::string p = sub(sub(path, "modes"), k);
    Mode m;
    m.alpha = complex_from_json(field(modes[k], "alpha", p), sub(p, "alpha"));
    const Json& poly = array(field(modes[k], "poly", p), sub(p, "poly"));
    for (size_t i = 0; i < poly.size(); ++i) m.poly.push_back(complex_from_json(poly[i], sub(sub(p, "poly"), i)));
    out.push_back(std::move(m));
  }
  return ExpSolution(std::move(out));
}

TestFunction testfunction_from_json(const Json& j, const std::string& path) {
  Complex center = j.contains("center") ? complex_from_json(j["center"], sub(path, "center")) : Complex(0, 0);
  double radius = number(field(j, "radius", path), sub(path, "radius"));
  if (!(radius > 0)) schema(sub(path, "radius"), "radius must be positive");
  std::vector<Complex> poly{1.0};
  if (j.contains("poly")) {
    poly.clear();
    const Json& a = array(j["poly"], sub(path, "poly"));
    for (size_t k = 0; k < a.size(); ++k) poly.push_back(complex_from_json(a[k], sub(sub(path, "poly"), k)));
    if (poly.empty()) schema(sub(path, "poly"), "empty polynomial");
  }
  return bump(center, radius, poly);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema("$", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace ddelta
