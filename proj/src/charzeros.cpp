#include "ddelta/charzeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

namespace ddelta {

Rect::Rect(double a, double b, double c, double d) : re_min(a), re_max(b), im_min(c), im_max(d) {
  if (!(a < b) || !(c < d)) throw Error(ErrorKind::Usage, "rectangle needs re_min < re_max and im_min < im_max");
}

double Rect::diameter() const { return std::hypot(width(), height()); }

bool Rect::contains(Complex z) const {
  return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
}

namespace {

std::string describe(const Rect& r) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << r.re_min << ", " << r.re_max << "] x [" << r.im_min << ", " << r.im_max << "]";
  return os.str();
}

// Gauss-Kronrod 7/15 on [-1, 1].
constexpr std::array<double, 8> kXk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct BoundaryZeroHit {};
struct TooDeep {};

// Integrates q'/q dz along a parametrized path t in [0, 1].
class WindingIntegrator {
 public:
  WindingIntegrator(const HElement& q, std::function<Complex(double)> z, std::function<Complex(double)> dz)
      : q_(q), z_(std::move(z)), dz_(std::move(dz)) {}

  Complex run(double abs_tol) { return adapt(0.0, 1.0, abs_tol, 0); }

 private:
  Complex integrand(double t, double& mn, double& mx) const {
    Complex z = z_(t);
    Complex v = q_.eval(z);
    double a = std::abs(v);
    if (!std::isfinite(a) || a == 0.0) throw BoundaryZeroHit{};
    mn = std::min(mn, a);
    mx = std::max(mx, a);
    return q_.eval_derivative(z) / v * dz_(t);
  }

  Complex adapt(double a, double b, double tol, int depth) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    Complex fc = integrand(c, mn, mx);
    Complex kron = fc * kWk[7];
    Complex gauss = fc * kWg[3];
    double scale = std::abs(fc) * kWk[7];
    for (int i = 0; i < 7; ++i) {
      Complex f1 = integrand(c - h * kXk[static_cast<size_t>(i)], mn, mx);
      Complex f2 = integrand(c + h * kXk[static_cast<size_t>(i)], mn, mx);
      kron += (f1 + f2) * kWk[static_cast<size_t>(i)];
      scale += (std::abs(f1) + std::abs(f2)) * kWk[static_cast<size_t>(i)];
      if (i % 2 == 1) gauss += (f1 + f2) * kWg[static_cast<size_t>(i / 2)];
    }
    if (mn < 1e-13 * mx) throw BoundaryZeroHit{};
    kron *= h;
    gauss *= h;
    if (std::abs(kron - gauss) <= std::max(tol, 1e-6 * h * scale)) return kron;
    if (depth >= 40) throw TooDeep{};
    return adapt(a, c, 0.5 * tol, depth + 1) + adapt(c, b, 0.5 * tol, depth + 1);
  }

  const HElement& q_;
  std::function<Complex(double)> z_, dz_;
};

// (1 / 2 pi i) * integral of q'/q around rect.
double winding_rect(const HElement& q, const Rect& r) {
  const std::array<Complex, 5> corners = {Complex(r.re_min, r.im_min), Complex(r.re_max, r.im_min),
                                          Complex(r.re_max, r.im_max), Complex(r.re_min, r.im_max),
                                          Complex(r.re_min, r.im_min)};
  Complex total{0, 0};
  for (size_t e = 0; e < 4; ++e) {
    Complex a = corners[e], d = corners[e + 1] - corners[e];
    WindingIntegrator wi(
        q, [a, d](double t) { return a + t * d; }, [d](double) { return d; });
    total += wi.run(1e-8);
  }
  return (total / Complex(0, 2 * M_PI)).real();
}

int round_winding(double w, const std::string& where) {
  double n = std::round(w);
  if (std::abs(w - n) >= 0.25)
    throw Error(ErrorKind::NonConvergence,
                "winding integral " + std::to_string(w) + " is not near an integer on " + where);
  return static_cast<int>(n);
}

int count_or_throw(const HElement& q, const Rect& r) {
  try {
    return round_winding(winding_rect(q, r), describe(r));
  } catch (const BoundaryZeroHit&) {
  } catch (const TooDeep&) {
  }
  throw Error(ErrorKind::BoundaryZero,
              "q* vanishes (numerically) on the boundary of " + describe(r) + "; try a perturbed rectangle");
}

struct Newton {
  Complex root;
  double last_step = 0;
  bool converged = false;
};

Newton newton(const CompiledExpPoly& f, const CompiledExpPoly& df, Complex z0, const Rect& box, double tol) {
  Newton res{z0};
  Complex z = z0;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    Complex fz = f(z), dfz = df(z);
    if (fz == Complex(0, 0)) {
      res = {z, 0.0, true};
      return res;
    }
    if (dfz == Complex(0, 0) || !std::isfinite(std::abs(dfz))) return res;
    Complex step = fz / dfz;
    z -= step;
    double s = std::abs(step);
    if (!box.contains(z) || !std::isfinite(s)) return res;
    if (s <= 4e-16 * std::max(1.0, std::abs(z)) || (s < tol && s >= prev)) {
      res = {z, std::min(s, prev), s < tol || prev < tol};
      return res;
    }
    prev = s;
  }
  res = {z, prev, prev < tol};
  return res;
}

class ZeroFinder {
 public:
  ZeroFinder(const HElement& q, const ZeroOptions& opts)
      : q_(q), opts_(opts), den_roots_(numeric_roots(q.den())) {
    derivs_.push_back(q.full_numerator());
  }

  void process(const Rect& r, int n, int depth) {
    if (n == 0) return;
    const double diam = r.diameter();
    if (n == 1 && diam < 1.0 && try_cluster(r, 1)) return;
    if (n >= 2 && (diam < opts_.tol || depth >= opts_.max_depth)) {
      if (!try_cluster(r, n)) out.push_back({r.center(), n, 0.5 * diam});
      return;
    }
    if (depth >= opts_.max_depth)
      throw Error(ErrorKind::NonConvergence, "zero refinement did not converge in " + describe(r));
    if (split(r, n, depth)) return;
    // Below the scale where winding numbers can be resolved in floating point.
    if (n >= 2) {
      if (!try_cluster(r, n)) out.push_back({r.center(), n, 0.5 * diam});
      return;
    }
    if (!try_cluster(r, n)) throw Error(ErrorKind::NonConvergence, "could not isolate the zero in " + describe(r));
  }

  std::vector<ZeroCluster> out;

 private:
  bool split(const Rect& r, int n, int depth) {
    for (double f : {0.5, 0.5123, 0.4783, 0.5871, 0.4219}) {
      Rect a = r, b = r;
      if (r.width() >= r.height()) {
        double x = r.re_min + f * r.width();
        a.re_max = x;
        b.re_min = x;
      } else {
        double y = r.im_min + f * r.height();
        a.im_max = y;
        b.im_min = y;
      }
      int na = 0, nb = 0;
      try {
        na = count_or_throw(q_, a);
        nb = count_or_throw(q_, b);
      } catch (const Error&) {
        continue;
      }
      if (na + nb != n || na < 0 || nb < 0) continue;
      process(a, na, depth + 1);
      process(b, nb, depth + 1);
      return true;
    }
    return false;
  }

  const ExpPoly& derivative(int k) {
    while (static_cast<int>(derivs_.size()) <= k) derivs_.push_back(ep_derivative(derivs_.back()));
    return derivs_[static_cast<size_t>(k)];
  }

  // Newton on the derivative of the numerator that has a simple zero there.
  bool try_cluster(const Rect& r, int n) {
    const Rect wide = r.inflated(r.diameter());
    int k = 0;
    for (Complex d : den_roots_)
      if (wide.contains(d)) ++k;
    const int order = n + k - 1;
    CompiledExpPoly f(derivative(order)), df(derivative(order + 1));
    Newton nt = newton(f, df, r.center(), n == 1 ? r.inflated(1e-12 * (1 + r.diameter())) : wide, opts_.tol);
    if (!nt.converged) return false;
    if (n == 1 && !r.inflated(1e-12 * (1 + r.diameter())).contains(nt.root)) return false;
    out.push_back({nt.root, n, std::max(nt.last_step, 4e-16 * std::abs(nt.root))});
    return true;
  }

  const HElement& q_;
  ZeroOptions opts_;
  std::vector<Complex> den_roots_;
  std::vector<ExpPoly> derivs_;
};

}  // namespace

int count_zeros(const HElement& q, const Rect& rect) {
  if (q.is_zero()) throw Error(ErrorKind::DivisionByZero, "zeros of the zero element");
  return count_or_throw(q, rect);
}

std::vector<ZeroCluster> find_zeros(const HElement& q, const Rect& rect, const ZeroOptions& opts) {
  if (q.is_zero()) throw Error(ErrorKind::DivisionByZero, "zeros of the zero element");
  Rect r = rect;
  int n = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      n = count_or_throw(q, r);
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BoundaryZero || attempt >= 3) throw;
      r = r.inflated(1e-6);
    }
  }
  ZeroFinder finder(q, opts);
  finder.process(r, n, 0);
  auto out = std::move(finder.out);
  // Real parts equal up to rounding compare by imaginary part.
  auto key = [](const ZeroCluster& c) { return std::make_pair(std::round(c.center.real() * 1e6), c.center.imag()); };
  std::sort(out.begin(), out.end(), [&](const ZeroCluster& a, const ZeroCluster& b) { return key(a) < key(b); });
  return out;
}

int vanishing_order(const HElement& q, Complex point, double tol) {
  if (q.is_zero()) throw Error(ErrorKind::DivisionByZero, "vanishing order of the zero element");
  double rho = std::max(tol, 1e-4);
  for (int attempt = 0; attempt < 4; ++attempt, rho *= 1.37) {
    try {
      WindingIntegrator wi(
          q, [=](double t) { return point + std::polar(rho, 2 * M_PI * t); },
          [=](double t) { return Complex(0, 2 * M_PI) * std::polar(rho, 2 * M_PI * t); });
      double w = (wi.run(1e-8) / Complex(0, 2 * M_PI)).real();
      return round_winding(w, "circle of radius " + std::to_string(rho));
    } catch (const BoundaryZeroHit&) {
    } catch (const TooDeep&) {
    }
  }
  throw Error(ErrorKind::NonConvergence, "winding number around the point did not settle");
}

}  // namespace ddelta
