// Command-line front end: ddelta <subcommand> [args] [--tol ..] [--format text] ...

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ddelta/cli.hpp"

using namespace ddelta;

namespace {

std::vector<double> number_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Usage, "bad number '" + item + "' in " + what);
    }
  }
  return out;
}

Json complex_arg(const std::string& s) {
  auto v = number_list(s, "--mode");
  if (v.size() == 1) v.push_back(0);
  if (v.size() != 2) throw Error(ErrorKind::Usage, "--mode takes re[,im]");
  return Json::array({v[0], v[1]});
}

Json json_arg(const std::string& s) {
  // A value naming a readable file is read from that file.
  std::ifstream in(s);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
  }
  return parse_json(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential-polynomial operators: exact ring arithmetic, zeros, solutions, currents, division"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file, rect, lambda, format;
  double tol = 0;
  int grid = 0;
  long long seed = -1;
  app.add_option("--config", config_file, "JSON config file (overrides DDELTA_CONFIG)");
  app.add_option("--tol", tol, "zero-finder tolerance");
  app.add_option("--rect", rect, "re_min,re_max,im_min,im_max");
  app.add_option("--lambda", lambda, "comma-separated lambda schedule");
  app.add_option("--grid", grid, "quadrature grid size");
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", seed, "seed for random initial data");

  Json payload = Json::object();
  std::string a, b, init, mode, bump, q, h, gens, matrix;
  double horizon = 8, step = 1.0 / 256, support = 1, from = -1, radius = 30;
  int modes = 0, alpha = 0, n = 61;
  bool csv = false;

  auto* normalize = app.add_subcommand("normalize", "canonical form and entirety certificate");
  normalize->add_option("expr", a)->required();
  auto* divides = app.add_subcommand("divides", "quotient b / a in H when it exists");
  divides->add_option("a", a)->required();
  divides->add_option("b", b)->required();
  auto* gcd = app.add_subcommand("gcd", "greatest common divisor");
  gcd->add_option("a", a)->required();
  gcd->add_option("b", b)->required();
  auto* bezout = app.add_subcommand("bezout", "u a + v b = gcd");
  bezout->add_option("a", a)->required();
  bezout->add_option("b", b)->required();
  auto* smith_cmd = app.add_subcommand("smith", "Smith form of a matrix such as [[s-1],[z]]");
  smith_cmd->add_option("matrix", matrix)->required();
  auto* zeros = app.add_subcommand("zeros", "zeros of q* in --rect");
  zeros->add_option("expr", a)->required();
  auto* solve = app.add_subcommand("solve", "exponential-polynomial solution basis in --rect");
  solve->add_option("expr", a);
  solve->add_option("--matrix", matrix, "system matrix instead of a scalar operator");
  auto* simulate = app.add_subcommand("simulate", "method of steps");
  auto* project = app.add_subcommand("project", "least-squares projection of a simulated trajectory");
  for (auto* s : {simulate, project}) {
    s->add_option("expr", a)->required();
    s->add_option("--init", init, "initial ExpSolution as JSON (or a file)");
    s->add_option("--mode", mode, "initial data e^{alpha x}, alpha as re,im");
    s->add_option("--horizon", horizon);
    s->add_option("--step", step);
  }
  simulate->add_flag("--csv", csv, "emit x,re,im rows");
  project->add_option("--modes", modes, "number of basis modes");
  project->add_option("--from", from, "fit window start");
  auto* pv = app.add_subcommand("pv", "principal value pairing with a bump");
  auto* residue = app.add_subcommand("residue", "residue pairing with a bump");
  for (auto* s : {pv, residue}) {
    s->add_option("expr", a)->required();
    s->add_option("--support", support, "radius of the default bump at 0");
    s->add_option("--bump", bump, "{center, radius, poly} as JSON (or a file)");
  }
  auto* hefer = app.add_subcommand("hefer", "Hefer pair for q(zeta1) zeta2^alpha");
  hefer->add_option("--q,q", q)->required();
  hefer->add_option("--alpha", alpha);
  auto* growth = app.add_subcommand("growth", "Paley-Wiener growth bounds");
  growth->add_option("expr", a)->required();
  growth->add_option("--radius", radius);
  growth->add_option("--n", n, "samples per side");
  auto* member = app.add_subcommand("member", "ideal membership with cofactors");
  member->set_help_flag("--help", "Print this help message and exit");
  member->add_option("--h", h)->required();
  member->add_option("--gens", gens, "generators separated by ';'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::Usage);
  }

  Config config;
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    config = load_config();
    if (!config_file.empty()) config = config_from_json(json_arg(config_file));
    Json over = Json::object();
    if (app.count("--tol")) over["tol"] = tol;
    if (!rect.empty()) {
      auto r = number_list(rect, "--rect");
      over["rect"] = r;
    }
    if (!lambda.empty()) over["lambda_schedule"] = number_list(lambda, "--lambda");
    if (app.count("--grid")) over["grid"] = grid;
    if (!format.empty()) over["format"] = format;
    if (app.count("--seed")) over["seed"] = seed;
    config = config_from_json(over, config);

    if (name == "normalize" || name == "zeros" || name == "growth" || name == "pv" || name == "residue" ||
        name == "simulate" || name == "project")
      payload["expr"] = a;
    if (name == "solve") {
      if (!matrix.empty())
        payload["matrix"] = matrix;
      else if (!a.empty())
        payload["expr"] = a;
      else
        throw Error(ErrorKind::Usage, "solve needs an expression or --matrix");
    }
    if (name == "divides" || name == "gcd" || name == "bezout") {
      payload["a"] = a;
      payload["b"] = b;
    }
    if (name == "smith") payload["matrix"] = matrix;
    if (name == "simulate" || name == "project") {
      if (!init.empty()) payload["init"] = json_arg(init);
      if (!mode.empty()) payload["mode"] = complex_arg(mode);
      payload["horizon"] = horizon;
      payload["step"] = step;
      payload["csv"] = csv;
      if (name == "project" && sub->count("--modes")) payload["modes"] = modes;
      if (name == "project" && sub->count("--from")) payload["from"] = from;
    }
    if (name == "pv" || name == "residue") {
      payload["support"] = support;
      if (!bump.empty()) payload["bump"] = json_arg(bump);
    }
    if (name == "hefer") {
      payload["q"] = q;
      payload["alpha"] = alpha;
    }
    if (name == "growth") {
      payload["radius"] = radius;
      payload["n"] = n;
    }
    if (name == "member") {
      payload["h"] = h;
      payload["gens"] = gens;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return e.exit_code();
  }
  return dispatch(name, config, payload, std::cout, std::cerr);
}
