#include "ddelta/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "ddelta/parse.hpp"

namespace ddelta {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::SchemaViolation, path + ": " + msg);
}

const Json& need(const Json& p, const char* key) {
  if (!p.is_object() || !p.contains(key)) throw Error(ErrorKind::Usage, std::string("missing argument '") + key + "'");
  return p[key];
}

std::string need_string(const Json& p, const char* key) {
  const Json& v = need(p, key);
  if (!v.is_string()) schema(std::string("$.") + key, "expected a string");
  return v.get<std::string>();
}

double get_number(const Json& p, const char* key, double fallback) {
  if (!p.is_object() || !p.contains(key) || p[key].is_null()) return fallback;
  if (!p[key].is_number()) schema(std::string("$.") + key, "expected a number");
  return p[key].get<double>();
}

int get_int(const Json& p, const char* key, int fallback) {
  if (!p.is_object() || !p.contains(key) || p[key].is_null()) return fallback;
  if (!p[key].is_number_integer()) schema(std::string("$.") + key, "expected an integer");
  return p[key].get<int>();
}

HElement operand(const Json& p, const char* key) { return parse_operator(need_string(p, key)); }

Rect rect_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) schema(path, "expected [re_min, re_max, im_min, im_max]");
  double v[4];
  for (size_t k = 0; k < 4; ++k) {
    if (!j[k].is_number()) schema(path + "[" + std::to_string(k) + "]", "expected a number");
    v[k] = j[k].get<double>();
  }
  if (!(v[0] < v[1] && v[2] < v[3])) schema(path, "empty rectangle");
  return {v[0], v[1], v[2], v[3]};
}

const char* failure_name(DivisionResult::Failure f) {
  switch (f) {
    case DivisionResult::Failure::SigmaDivision: return "sigma-division";
    case DivisionResult::Failure::Entirety: return "entirety";
    default: return "none";
  }
}

ExpSolution initial_data(const Json& p, unsigned seed) {
  if (p.contains("init")) return expsolution_from_json(p["init"], "$.init");
  if (p.contains("mode")) return ExpSolution::monomial_mode(complex_from_json(p["mode"], "$.mode"));
  // Random cubic history.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<Complex> poly;
  for (int k = 0; k < 4; ++k) poly.push_back({d(rng), 0.0});
  return ExpSolution({Mode{0.0, poly}});
}

std::vector<ExpSolution> ranked_basis(const HElement& q, const Config& c) {
  SynthesisOptions so;
  so.zeros.tol = c.tol;
  auto basis = solution_basis_single(q, c.rect, so);
  std::stable_sort(basis.begin(), basis.end(), [](const ExpSolution& a, const ExpSolution& b) {
    Complex x = a.modes().front().alpha, y = b.modes().front().alpha;
    if (x.real() != y.real()) return x.real() > y.real();
    return std::abs(x.imag()) < std::abs(y.imag());
  });
  return basis;
}

CurrentOptions current_options(const Json& p, const Config& c) {
  CurrentOptions o;
  o.lambdas = c.lambda_schedule;
  if (p.contains("lambda")) {
    const Json& l = p["lambda"];
    if (!l.is_array() || l.empty()) schema("$.lambda", "expected a non-empty list");
    o.lambdas.clear();
    for (size_t k = 0; k < l.size(); ++k) {
      if (!l[k].is_number() || !(l[k].get<double>() > 0)) schema("$.lambda[" + std::to_string(k) + "]", "expected a positive number");
      o.lambdas.push_back(l[k].get<double>());
    }
  }
  o.grid = get_int(p, "grid", c.grid);
  if (o.grid < 16) schema("$.grid", "grid must be at least 16");
  return o;
}

Json currents(const std::string& name, const Json& p, const Config& c) {
  HElement f = operand(p, "expr");
  TestFunction phi = p.contains("bump") ? testfunction_from_json(p["bump"], "$.bump")
                                        : bump(0.0, get_number(p, "support", 1.0));
  CurrentOptions o = current_options(p, c);
  CurrentEval e = name == "pv" ? pv_pair(f, phi, o) : residue_pair(f, phi, o);
  Json out = to_json(e);
  out["f"] = f.to_string();
  out["test_function"] = {{"center", to_json(phi.center)}, {"radius", phi.radius}};
  return out;
}

Json cmd_solve(const Json& p, const Config& c) {
  SynthesisOptions so;
  so.zeros.tol = c.tol;
  Json basis = Json::array();
  if (p.contains("matrix")) {
    HMatrix m = parse_matrix(need_string(p, "matrix"));
    for (const auto& v : solution_basis_system(m, c.rect, so)) {
      Json comps = Json::array();
      for (const auto& s : v.components) comps.push_back(to_json(s));
      basis.push_back({{"components", comps}, {"free", v.free}});
    }
    return {{"matrix", print(m)}, {"rect", {c.rect.re_min, c.rect.re_max, c.rect.im_min, c.rect.im_max}}, {"basis", basis}};
  }
  HElement q = operand(p, "expr");
  for (const auto& s : solution_basis_single(q, c.rect, so)) basis.push_back(to_json(s));
  return {{"q", q.to_string()}, {"rect", {c.rect.re_min, c.rect.re_max, c.rect.im_min, c.rect.im_max}}, {"basis", basis}};
}

void write_text(std::ostream& out, const Json& j, const std::string& prefix = "") {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (it->is_object() || (it->is_array() && !it->empty() && (it->front().is_object() || it->front().is_array())))
        write_text(out, *it, key);
      else
        out << key << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
    }
  } else if (j.is_array()) {
    for (size_t k = 0; k < j.size(); ++k) {
      std::string key = prefix + "[" + std::to_string(k) + "]";
      if (j[k].is_object() || j[k].is_array())
        write_text(out, j[k], key);
      else
        out << key << ": " << (j[k].is_string() ? j[k].get<std::string>() : j[k].dump()) << "\n";
    }
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

Config config_from_json(const Json& j, const Config& base) {
  if (!j.is_object()) schema("$", "expected an object");
  Config c = base;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const std::string path = "$." + k;
    const Json& v = *it;
    if (k == "tol") {
      if (!v.is_number() || !(v.get<double>() > 0)) schema(path, "tol must be a positive number");
      c.tol = v.get<double>();
    } else if (k == "rect") {
      c.rect = rect_from_json(v, path);
    } else if (k == "lambda_schedule") {
      if (!v.is_array() || v.empty()) schema(path, "expected a non-empty list");
      c.lambda_schedule.clear();
      for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number() || !(v[i].get<double>() > 0)) schema(path + "[" + std::to_string(i) + "]", "expected a positive number");
        c.lambda_schedule.push_back(v[i].get<double>());
      }
    } else if (k == "grid") {
      if (!v.is_number_integer() || v.get<int>() < 16) schema(path, "grid must be an integer >= 16");
      c.grid = v.get<int>();
    } else if (k == "format") {
      if (!v.is_string() || (v != "json" && v != "text")) schema(path, "format must be \"json\" or \"text\"");
      c.format = v.get<std::string>();
    } else if (k == "seed") {
      if (!v.is_number_integer() || v.get<long long>() < 0) schema(path, "seed must be a non-negative integer");
      c.seed = v.get<unsigned>();
    } else {
      schema(path, "unknown field");
    }
  }
  return c;
}

Json to_json(const Config& c) {
  return {{"tol", c.tol},
          {"rect", {c.rect.re_min, c.rect.re_max, c.rect.im_min, c.rect.im_max}},
          {"lambda_schedule", c.lambda_schedule},
          {"grid", c.grid},
          {"format", c.format},
          {"seed", c.seed}};
}

Config load_config() {
  const char* path = std::getenv("DDELTA_CONFIG");
  if (!path || !*path) return {};
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, std::string("cannot read DDELTA_CONFIG file ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(parse_json(ss.str()));
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"normalize", "divides", "gcd",     "bezout", "smith",
                                              "zeros",     "solve",   "simulate", "project", "pv",
                                              "residue",   "hefer",   "growth",  "member"};
  return names;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << std::setprecision(17) << "x,re,im\n";
  for (size_t i = 0; i < t.values.size(); ++i) os << t.x(i) << "," << t.values[i].real() << "," << t.values[i].imag() << "\n";
  return os.str();
}

Json run_subcommand(const std::string& name, const Config& c, const Json& p) {
  if (name == "normalize") {
    HElement h = operand(p, "expr");
    Json out = to_json(h);
    out["certificate"] = to_json(h.certificate());
    return out;
  }
  if (name == "divides") {
    HElement a = operand(p, "a"), b = operand(p, "b");
    DivisionResult r = h_divides(a, b);
    Json out = {{"divides", static_cast<bool>(r)}};
    if (r) {
      out["quotient"] = r.quotient->to_string();
      out["verified"] = *r.quotient * a == b;
    } else {
      out["failure"] = failure_name(r.failure);
      out["detail"] = r.detail;
    }
    return out;
  }
  if (name == "gcd") {
    HElement a = operand(p, "a"), b = operand(p, "b");
    HElement g = h_gcd(a, b);
    auto wa = h_divides(g, a), wb = h_divides(g, b);
    return {{"gcd", g.to_string()},
            {"witnesses",
             {{"a_over_gcd", wa ? wa.quotient->to_string() : ""}, {"b_over_gcd", wb ? wb.quotient->to_string() : ""}}}};
  }
  if (name == "bezout") {
    HElement a = operand(p, "a"), b = operand(p, "b");
    BezoutResult r = h_bezout(a, b);
    return {{"g", r.g.to_string()}, {"u", r.u.to_string()}, {"v", r.v.to_string()}, {"tier", r.tier},
            {"verified", r.u * a + r.v * b == r.g}};
  }
  if (name == "smith") {
    HMatrix m = parse_matrix(need_string(p, "matrix"));
    return to_json(smith(m), m);
  }
  if (name == "zeros") {
    HElement q = operand(p, "expr");
    ZeroOptions zo;
    zo.tol = c.tol;
    Json out = Json::array();
    for (const auto& z : find_zeros(q, c.rect, zo)) out.push_back(to_json(z));
    return {{"q", q.to_string()}, {"rect", {c.rect.re_min, c.rect.re_max, c.rect.im_min, c.rect.im_max}}, {"clusters", out}};
  }
  if (name == "solve") return cmd_solve(p, c);
  if (name == "simulate") {
    HElement q = operand(p, "expr");
    ExpSolution init = initial_data(p, c.seed);
    Trajectory t = method_of_steps(q, init, get_number(p, "horizon", 8.0), get_number(p, "step", 1.0 / 256));
    Json out = {{"q", q.to_string()}, {"init", to_json(init)}, {"trajectory", to_json(t)}};
    return out;
  }
  if (name == "project") {
    HElement q = operand(p, "expr");
    ExpSolution init = initial_data(p, c.seed);
    double horizon = get_number(p, "horizon", 8.0);
    Trajectory t = method_of_steps(q, init, horizon, get_number(p, "step", 1.0 / 256));
    auto basis = ranked_basis(q, c);
    int k = get_int(p, "modes", static_cast<int>(basis.size()));
    if (k < 1 || k > static_cast<int>(basis.size()))
      throw Error(ErrorKind::Usage, "modes must lie in [1, " + std::to_string(basis.size()) + "]");
    basis.resize(static_cast<size_t>(k));
    RetardedForm rf = retarded_form(q);
    Projection pr = spectral_project(t, basis, get_number(p, "from", static_cast<double>(rf.max_delay)));
    Json modes = Json::array();
    for (const auto& b : basis) modes.push_back(to_json(b));
    Json out = to_json(pr);
    out["basis"] = modes;
    return out;
  }
  if (name == "pv" || name == "residue") return currents(name, p, c);
  if (name == "hefer") {
    HeferInput in = parse_hefer_input(need_string(p, "q"));
    int alpha = get_int(p, "alpha", 0) + in.alpha;
    HeferPair hp = hefer_pair_n2(in.q, alpha);
    Json out = to_json(hp);
    out["q"] = in.q.to_string();
    out["alpha"] = alpha;
    return out;
  }
  if (name == "growth") {
    HElement q = operand(p, "expr");
    GrowthBounds b = growth_bounds(q);
    double r = get_number(p, "radius", 30.0);
    int n = get_int(p, "n", 61);
    auto samples = sample_square([&](Complex z) { return q.eval(z); }, r, n);
    GrowthCert fit = pw_growth_fit(samples, PolyC(GaussianRational(1)));
    return {{"q", q.to_string()}, {"bounds", {{"C", b.C}, {"M", b.M}, {"N", b.N}}}, {"fit", to_json(fit)}};
  }
  if (name == "member") {
    HElement h = operand(p, "h");
    const Json& g = need(p, "gens");
    std::vector<HElement> gens;
    if (g.is_string()) {
      std::string s = g.get<std::string>();
      size_t start = 0;
      for (;;) {
        size_t semi = s.find(';', start);
        gens.push_back(parse_operator(s.substr(start, semi == std::string::npos ? std::string::npos : semi - start)));
        if (semi == std::string::npos) break;
        start = semi + 1;
      }
    } else if (g.is_array()) {
      for (size_t k = 0; k < g.size(); ++k) gens.push_back(helement_from_json(g[k], "$.gens[" + std::to_string(k) + "]"));
    } else {
      schema("$.gens", "expected a string or a list");
    }
    return to_json(ideal_member(h, gens), h, gens);
  }
  throw Error(ErrorKind::Usage, "unknown subcommand '" + name + "'");
}

int dispatch(const std::string& name, const Config& config, const Json& payload, std::ostream& out, std::ostream& err) {
  try {
    Json result = run_subcommand(name, config, payload);
    if (name == "simulate" && payload.value("csv", false)) {
      const Json& t = result["trajectory"];
      Trajectory tr;
      tr.x0 = t["x0"].get<double>();
      tr.step = t["step"].get<double>();
      for (const auto& v : t["values"]) tr.values.push_back(complex_from_json(v));
      out << trajectory_csv(tr);
    } else if (config.format == "text")
      write_text(out, result);
    else
      out << result.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    Json j = {{"error", error_kind_name(e.kind())}, {"message", e.what()}, {"exit_code", e.exit_code()}};
    if (config.format == "text")
      write_text(out, j);
    else
      out << j.dump(2) << "\n";
    return e.exit_code();
  }
}

}  // namespace ddelta
