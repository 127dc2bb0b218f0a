#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ddelta/cli.hpp"
#include "ddelta/parse.hpp"

namespace py = pybind11;
using namespace ddelta;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
  if (o.is_none()) return Json::object();
  return parse_json(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

HElement element(const py::object& o) {
  if (py::isinstance<HElement>(o)) return o.cast<HElement>();
  if (py::isinstance<py::str>(o)) return parse_operator(o.cast<std::string>());
  if (py::isinstance<py::int_>(o)) return HElement(GaussianRational(o.cast<long>()));
  throw py::type_error("expected an HElement, an expression string or an int");
}

std::vector<HElement> elements(const py::iterable& xs) {
  std::vector<HElement> out;
  for (auto x : xs) out.push_back(element(py::reinterpret_borrow<py::object>(x)));
  return out;
}

TestFunction make_bump(Complex center, double radius, std::vector<Complex> poly) {
  if (poly.empty()) poly = {1.0};
  return bump(center, radius, std::move(poly));
}

CurrentOptions current_options(const std::optional<std::vector<double>>& lambdas, int grid) {
  CurrentOptions o;
  if (lambdas) o.lambdas = *lambdas;
  o.grid = grid;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact ring arithmetic for exponential-polynomial operators, with zeros, solutions, currents and division";

  static py::handle exc_type = py::exception<Error>(m, "DDeltaError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(exc_type)(e.what());
      inst.attr("kind") = error_kind_name(e.kind());
      inst.attr("exit_code") = e.exit_code();
      PyErr_SetObject(exc_type.ptr(), inst.ptr());
    }
  });

  py::class_<HElement>(m, "HElement")
      .def(py::init([](const std::string& text) { return parse_operator(text); }), py::arg("expr"))
      .def("__str__", &HElement::to_string)
      .def("__repr__", [](const HElement& h) { return "HElement('" + h.to_string() + "')"; })
      .def("__eq__", [](const HElement& a, const py::object& b) { return a == element(b); })
      .def("__hash__", [](const HElement& h) { return py::hash(py::str(h.to_string())); })
      .def("__add__", [](const HElement& a, const py::object& b) { return a + element(b); })
      .def("__radd__", [](const HElement& a, const py::object& b) { return element(b) + a; })
      .def("__sub__", [](const HElement& a, const py::object& b) { return a - element(b); })
      .def("__rsub__", [](const HElement& a, const py::object& b) { return element(b) - a; })
      .def("__mul__", [](const HElement& a, const py::object& b) { return a * element(b); })
      .def("__rmul__", [](const HElement& a, const py::object& b) { return element(b) * a; })
      .def("__neg__", [](const HElement& a) { return -a; })
      .def("__call__", &HElement::eval, py::arg("z"))
      .def("derivative", &HElement::eval_derivative, py::arg("z"))
      .def("is_zero", &HElement::is_zero)
      .def("is_unit", &HElement::is_unit)
      .def("same_up_to_unit", [](const HElement& a, const py::object& b) { return a.same_up_to_unit(element(b)); })
      .def("to_json", [](const HElement& h) { return to_python(to_json(h)); });

  m.def("parse", &parse_operator, py::arg("expr"), "Parse and normalize an operator expression.");

  m.def(
      "is_entire",
      [](const std::string& expr) {
        try {
          parse_operator(expr);
          return true;
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::NotEntire) return false;
          throw;
        }
      },
      py::arg("expr"));

  m.def(
      "divides",
      [](const py::object& a, const py::object& b) -> std::optional<HElement> {
        auto r = h_divides(element(a), element(b));
        if (!r) return std::nullopt;
        return *r.quotient;
      },
      py::arg("a"), py::arg("b"), "Quotient q with q * a == b, or None.");
  m.def("gcd", [](const py::object& a, const py::object& b) { return h_gcd(element(a), element(b)); }, py::arg("a"),
        py::arg("b"));
  m.def(
      "bezout",
      [](const py::object& a, const py::object& b) {
        BezoutResult r = h_bezout(element(a), element(b));
        return py::make_tuple(r.g, r.u, r.v);
      },
      py::arg("a"), py::arg("b"), "(g, u, v) with u*a + v*b == g.");

  m.def(
      "smith",
      [](const std::string& matrix) {
        HMatrix p = parse_matrix(matrix);
        return to_python(to_json(smith(p), p));
      },
      py::arg("matrix"));

  m.def(
      "find_zeros",
      [](const py::object& q, std::tuple<double, double, double, double> rect, double tol) {
        ZeroOptions o;
        o.tol = tol;
        auto [a, b, c, d] = rect;
        std::vector<std::pair<Complex, int>> out;
        for (const auto& z : find_zeros(element(q), Rect(a, b, c, d), o)) out.emplace_back(z.center, z.multiplicity);
        return out;
      },
      py::arg("q"), py::arg("rect"), py::arg("tol") = 1e-9, "[(center, multiplicity)] sorted by (Re, Im).");
  m.def("vanishing_order", [](const py::object& q, Complex z) { return vanishing_order(element(q), z); }, py::arg("q"),
        py::arg("z"));

  m.def(
      "method_of_steps",
      [](const py::object& q, Complex alpha, double horizon, double step) {
        Trajectory t = method_of_steps(element(q), ExpSolution::monomial_mode(alpha), horizon, step);
        std::vector<double> xs;
        for (size_t i = 0; i < t.values.size(); ++i) xs.push_back(t.x(i));
        return py::make_tuple(xs, t.values);
      },
      py::arg("q"), py::arg("alpha"), py::arg("horizon") = 8.0, py::arg("step") = 1.0 / 256,
      "Simulate from the history e^{alpha x}; returns (xs, values).");

  m.def(
      "residue_pair",
      [](const py::object& f, Complex center, double radius, std::vector<Complex> poly,
         std::optional<std::vector<double>> lambdas, int grid) {
        return residue_pair(element(f), make_bump(center, radius, std::move(poly)), current_options(lambdas, grid)).value;
      },
      py::arg("f"), py::arg("center") = Complex(0, 0), py::arg("radius") = 1.0, py::arg("poly") = std::vector<Complex>{},
      py::arg("lambdas") = py::none(), py::arg("grid") = 512);
  m.def(
      "pv_pair",
      [](const py::object& f, Complex center, double radius, std::vector<Complex> poly,
         std::optional<std::vector<double>> lambdas, int grid) {
        return pv_pair(element(f), make_bump(center, radius, std::move(poly)), current_options(lambdas, grid)).value;
      },
      py::arg("f"), py::arg("center") = Complex(0, 0), py::arg("radius") = 1.0, py::arg("poly") = std::vector<Complex>{},
      py::arg("lambdas") = py::none(), py::arg("grid") = 512);
  m.def(
      "bump",
      [](Complex center, double radius, std::vector<Complex> poly, Complex z) {
        return make_bump(center, radius, std::move(poly))(z);
      },
      py::arg("center"), py::arg("radius"), py::arg("poly"), py::arg("z"), "Value of the bump test function at z.");

  m.def(
      "hefer_pair",
      [](const py::object& q, int alpha) { return to_python(to_json(hefer_pair_n2(element(q), alpha))); },
      py::arg("q"), py::arg("alpha"));

  m.def(
      "hermite_interpolate",
      [](const std::vector<std::pair<Complex, std::vector<Complex>>>& spec) {
        JetSpec js;
        for (const auto& [node, values] : spec) js.push_back({node, values});
        return hermite_interpolate(js);
      },
      py::arg("spec"), "Coefficients (in powers of z) matching [(node, [f, f', ...]), ...].");
  m.def(
      "ideal_member",
      [](const py::object& h, const py::iterable& gens) {
        auto g = elements(gens);
        MembershipResult r = ideal_member(element(h), g);
        return py::make_tuple(r.member, r.cofactors);
      },
      py::arg("h"), py::arg("gens"), "(member, cofactors) with sum(c * g) == h when member.");

  m.def(
      "run",
      [](const std::string& subcommand, const py::object& payload, const py::object& config) {
        Config c = config.is_none() ? Config{} : config_from_json(from_python(config));
        return to_python(run_subcommand(subcommand, c, from_python(payload)));
      },
      py::arg("subcommand"), py::arg("payload") = py::none(), py::arg("config") = py::none(),
      "Run a CLI subcommand on a dict payload and return its JSON result as Python objects.");
  m.attr("subcommands") = subcommands();
}
