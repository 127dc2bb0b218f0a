#include "ddelta/currents.hpp"

#include <algorithm>
#include <cmath>

#include "ddelta/synthesis.hpp"

namespace ddelta {

namespace {

constexpr double kFd = 1e-5;

// d/dz and d/dzbar of g by central differences.
Complex fd_dz(const std::function<Complex(Complex)>& g, Complex z) {
  Complex gx = (g(z + kFd) - g(z - kFd)) / (2 * kFd);
  Complex gy = (g(z + Complex(0, kFd)) - g(z - Complex(0, kFd))) / (2 * kFd);
  return 0.5 * (gx - Complex(0, 1) * gy);
}
Complex fd_dzbar(const std::function<Complex(Complex)>& g, Complex z) {
  Complex gx = (g(z + kFd) - g(z - kFd)) / (2 * kFd);
  Complex gy = (g(z + Complex(0, kFd)) - g(z - Complex(0, kFd))) / (2 * kFd);
  return 0.5 * (gx + Complex(0, 1) * gy);
}

// e^w - 1 without cancellation for small w.
Complex expm1c(Complex w) {
  const double x = w.real(), y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2 * s * s, std::exp(x) * std::sin(y)};
}

struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_legendre(int n) {
  GaussRule g{std::vector<double>(static_cast<size_t>(n)), std::vector<double>(static_cast<size_t>(n))};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x[static_cast<size_t>(i)] = x;
    g.w[static_cast<size_t>(i)] = 2 / ((1 - x * x) * dp * dp);
  }
  return g;
}

// Smooth step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double a = std::exp(-1 / x), b = std::exp(-1 / (1 - x));
  return a / (a + b);
}

struct Singular {
  Complex a;
  double rho = 1;
  double t_max = 40;
  std::vector<double> tail_rate;
};

// 1 on |z - a| <= rho/2, 0 outside rho.
double cutoff(const Singular& s, double r) { return smooth_step((s.rho - r) / (0.5 * s.rho)); }

using Density = std::function<void(Complex, std::vector<Complex>&)>;
// Density times r^2 at a + w, for the (log r, theta) quadrature.
using InnerDensity = std::function<void(size_t, Complex, std::vector<Complex>&)>;

std::vector<Complex> integrate(size_t k, Complex c, double radius, int grid, int angular,
                               const std::vector<Singular>& sing, const Density& outer, const InnerDensity& inner) {
  std::vector<Complex> total(k, Complex(0, 0)), val(k);
  // Outer: midpoint rule on the support box, the cutoffs removing each singularity.
  const double h = 2 * radius / grid;
  for (int i = 0; i < grid; ++i) {
    std::vector<Complex> row(k, Complex(0, 0));
    for (int j = 0; j < grid; ++j) {
      Complex z = c + Complex(-radius + (i + 0.5) * h, -radius + (j + 0.5) * h);
      if (std::abs(z - c) >= radius) continue;
      double chi = 0;
      for (const auto& s : sing) chi += cutoff(s, std::abs(z - s.a));
      if (chi >= 1.0) continue;
      outer(z, val);
      for (size_t l = 0; l < k; ++l) row[l] += (1 - chi) * val[l];
    }
    for (size_t l = 0; l < k; ++l) total[l] += row[l] * h * h;
  }
  // Inner: r = rho e^{-t}, dA = r^2 dt dtheta.
  static const GaussRule gl = gauss_legendre(16);
  for (size_t idx = 0; idx < sing.size(); ++idx) {
    const Singular& s = sing[idx];
    std::vector<double> edges;
    const double ln2 = std::log(2.0);
    for (int p = 0; p <= 8; ++p) edges.push_back(ln2 * p / 8);
    for (double e : {2.0, 4.0, 8.0, 14.0, 22.0, 31.0, 40.0})
      if (e < s.t_max) edges.push_back(e);
    edges.push_back(s.t_max);
    auto ring = [&](double t, std::vector<Complex>& acc) {
      std::fill(acc.begin(), acc.end(), Complex(0, 0));
      const double r = s.rho * std::exp(-t);
      for (int n = 0; n < angular; ++n) {
        Complex w = std::polar(r, 2 * M_PI * n / angular);
        inner(idx, w, val);
        for (size_t l = 0; l < k; ++l) acc[l] += val[l];
      }
      for (auto& x : acc) x *= 2 * M_PI / angular;
    };
    std::vector<Complex> acc(k);
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
      const double t0 = edges[e], t1 = edges[e + 1], half = 0.5 * (t1 - t0);
      for (size_t g = 0; g < gl.x.size(); ++g) {
        const double t = t0 + half * (1 + gl.x[g]);
        ring(t, acc);
        const double chi = cutoff(s, s.rho * std::exp(-t));
        for (size_t l = 0; l < k; ++l) total[l] += half * gl.w[g] * chi * acc[l];
      }
    }
    ring(s.t_max, acc);
    for (size_t l = 0; l < k; ++l) total[l] += acc[l] / s.tail_rate[l];
  }
  return total;
}

Complex neville_at_zero(const std::vector<double>& x, const std::vector<Complex>& y) {
  std::vector<Complex> p = y;
  const size_t n = x.size();
  for (size_t level = 1; level < n; ++level)
    for (size_t i = 0; i + level < n; ++i)
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
  return p[0];
}

// Zeros of f* near the support, each with its polar patch.
struct ZeroPatch {
  Complex a;
  int m;
  std::vector<Complex> taylor;
};

std::vector<ZeroPatch> zeros_near(const HElement& f, const TestFunction& phi) {
  const double R = phi.radius + 1.0;
  const Complex c = phi.center;
  Rect box(c.real() - R - 0.0123, c.real() + R + 0.0171, c.imag() - R - 0.0137, c.imag() + R + 0.0193);
  std::vector<ZeroPatch> out;
  for (const auto& z : find_zeros(f, box))
    if (std::abs(z.center - c) <= R) out.push_back({z.center, z.multiplicity, {}});
  for (auto& p : out) p.taylor = taylor_coefficients(f, p.a, p.m + 8);
  return out;
}

std::vector<Singular> patches(const std::vector<Complex>& centers, const std::vector<int>& mult, size_t k,
                              const std::function<double(int, double)>& rate) {
  std::vector<Singular> out;
  for (size_t i = 0; i < centers.size(); ++i) {
    double rho = 1.0;
    for (size_t j = 0; j < centers.size(); ++j)
      if (j != i) rho = std::min(rho, 0.45 * std::abs(centers[i] - centers[j]));
    Singular s{centers[i], rho, mult[i] == 1 ? 40.0 : std::log(1e5), {}};
    for (size_t l = 0; l < k; ++l) s.tail_rate.push_back(rate(mult[i], static_cast<double>(l)));
    out.push_back(std::move(s));
  }
  return out;
}

// f(a + w) / w^m and f'(a + w) / w^{m-1}.
void reduced(const HElement& f, const ZeroPatch& p, Complex w, Complex& h, Complex& h1) {
  if (std::abs(w) >= 1e-3) {
    h = f.eval(p.a + w) / std::pow(w, p.m);
    h1 = f.eval_derivative(p.a + w) / std::pow(w, p.m - 1);
    return;
  }
  h = h1 = 0;
  Complex pw = 1;
  for (size_t k = static_cast<size_t>(p.m); k < p.taylor.size(); ++k, pw *= w) {
    h += p.taylor[k] * pw;
    h1 += static_cast<double>(k) * p.taylor[k] * pw;
  }
}

enum class Kind { Pv, Residue };

CurrentEval evaluate(Kind kind, const HElement& f, const TestFunction& phi, const CurrentOptions& opts) {
  if (f.is_zero()) throw Error(ErrorKind::DivisionByZero, "current of 1/0");
  if (opts.lambdas.size() < 2) throw Error(ErrorKind::Usage, "lambda schedule needs at least two values");
  const auto& lam = opts.lambdas;
  const size_t k = lam.size();
  const auto zs = zeros_near(f, phi);
  std::vector<Complex> centers;
  std::vector<int> mult;
  for (const auto& z : zs) {
    centers.push_back(z.a);
    mult.push_back(z.m);
  }
  auto sing = patches(centers, mult, k, [&](int m, double l) {
    double lm = lam[static_cast<size_t>(l)];
    return kind == Kind::Residue ? 2 * m * lm : 2 * m * lm + 1;
  });

  Density outer = [&](Complex z, std::vector<Complex>& out) {
    Complex ph = phi(z);
    if (ph == Complex(0, 0)) {
      std::fill(out.begin(), out.end(), Complex(0, 0));
      return;
    }
    Complex fv = f.eval(z);
    double l2 = std::log(std::norm(fv));
    Complex base = kind == Kind::Pv ? ph / fv : std::conj(f.eval_derivative(z)) / std::norm(fv) * ph;
    for (size_t l = 0; l < k; ++l)
      out[l] = (kind == Kind::Pv ? 1.0 : lam[l]) * std::exp(lam[l] * l2) * base;
  };
  InnerDensity inner = [&](size_t idx, Complex w, std::vector<Complex>& out) {
    const ZeroPatch& p = zs[idx];
    Complex ph = phi(p.a + w);
    if (ph == Complex(0, 0)) {
      std::fill(out.begin(), out.end(), Complex(0, 0));
      return;
    }
    Complex h, h1;
    reduced(f, p, w, h, h1);
    const double r = std::abs(w), lr = std::log(r), lh = std::log(std::norm(h));
    const Complex dir = std::conj(w) / r;
    const int m = p.m;
    for (size_t l = 0; l < k; ++l) {
      const double L = lam[l];
      if (kind == Kind::Residue)
        out[l] = L * std::exp((L - 1) * lh + (2 * m * L - m + 1) * lr) * std::conj(h1) * std::pow(dir, m - 1) * ph;
      else
        out[l] = std::exp(L * lh + (2 * m * L - m + 2) * lr) / h * std::pow(dir, m) * ph;
    }
  };
  CurrentEval ev;
  ev.lambda_schedule = lam;
  ev.samples = integrate(k, phi.center, phi.radius, opts.grid, opts.angular, sing, outer, inner);
  ev.value = neville_at_zero(lam, ev.samples);
  // Agreement of the extrapolants that drop the largest or the smallest lambda.
  std::vector<double> ls(lam.begin() + 1, lam.end()), lb(lam.begin(), lam.end() - 1);
  std::vector<Complex> ss(ev.samples.begin() + 1, ev.samples.end()), sb(ev.samples.begin(), ev.samples.end() - 1);
  ev.residual = std::max({std::abs(ev.value - neville_at_zero(ls, ss)), std::abs(ev.value - neville_at_zero(lb, sb)),
                          1e-10 * std::abs(ev.value)});
  bool finite = std::isfinite(ev.value.real()) && std::isfinite(ev.value.imag());
  if (!finite || ev.residual > opts.divergence_tol * std::max(1.0, std::abs(ev.value)))
    throw Error(ErrorKind::QuadratureDivergence,
                "lambda extrapolation did not stabilize (residual " + std::to_string(ev.residual) + ")");
  return ev;
}

}  // namespace

// ---------------------------------------------------------------------------
// Test functions

Complex TestFunction::d_zeta2(Complex z) const { return fd_dz(d_zeta, z); }
Complex TestFunction::d_zetabar2(Complex z) const { return fd_dzbar(d_zetabar, z); }
Complex TestFunction::d_mixed(Complex z) const { return fd_dzbar(d_zeta, z); }

TestFunction bump(Complex center, double radius, std::vector<Complex> poly) {
  if (!(radius > 0)) throw Error(ErrorKind::Usage, "bump radius must be positive");
  auto window = [center, radius](Complex z, double& w1, double& q) {
    const Complex w = z - center;
    const double s2 = std::norm(w) / (radius * radius);
    if (s2 >= 1) return false;
    w1 = std::exp(1 - 1 / (1 - s2));
    q = w1 / (radius * radius * (1 - s2) * (1 - s2));
    return true;
  };
  auto p = [poly](Complex w) {
    Complex acc{0, 0};
    for (size_t k = poly.size(); k-- > 0;) acc = acc * w + poly[k];
    return acc;
  };
  auto dp = [poly](Complex w) {
    Complex acc{0, 0};
    for (size_t k = poly.size(); k-- > 1;) acc = acc * w + static_cast<double>(k) * poly[k];
    return acc;
  };
  TestFunction t;
  t.center = center;
  t.radius = radius;
  t.value = [=](Complex z) {
    double w1, q;
    return window(z, w1, q) ? p(z - center) * w1 : Complex(0, 0);
  };
  t.d_zeta = [=](Complex z) {
    double w1, q;
    if (!window(z, w1, q)) return Complex(0, 0);
    const Complex w = z - center;
    return dp(w) * w1 - p(w) * q * std::conj(w);
  };
  t.d_zetabar = [=](Complex z) {
    double w1, q;
    if (!window(z, w1, q)) return Complex(0, 0);
    const Complex w = z - center;
    return -p(w) * q * w;
  };
  return t;
}

TestFunction dbar(const TestFunction& phi) {
  TestFunction t;
  t.center = phi.center;
  t.radius = phi.radius;
  t.value = phi.d_zetabar;
  auto g = phi.d_zetabar;
  t.d_zeta = [g](Complex z) { return fd_dz(g, z); };
  t.d_zetabar = [g](Complex z) { return fd_dzbar(g, z); };
  return t;
}

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
  TestFunction t;
  t.center = a.center;
  t.radius = std::max(a.radius, std::abs(b.center - a.center) + b.radius);
  t.value = [a, b](Complex z) { return a.value(z) + b.value(z); };
  t.d_zeta = [a, b](Complex z) { return a.d_zeta(z) + b.d_zeta(z); };
  t.d_zetabar = [a, b](Complex z) { return a.d_zetabar(z) + b.d_zetabar(z); };
  return t;
}

TestFunction operator*(Complex c, const TestFunction& a) {
  TestFunction t = a;
  t.value = [a, c](Complex z) { return c * a.value(z); };
  t.d_zeta = [a, c](Complex z) { return c * a.d_zeta(z); };
  t.d_zetabar = [a, c](Complex z) { return c * a.d_zetabar(z); };
  return t;
}

// ---------------------------------------------------------------------------
// Pairings

CurrentEval pv_pair(const HElement& f, const TestFunction& phi, const CurrentOptions& opts) {
  return evaluate(Kind::Pv, f, phi, opts);
}

CurrentEval residue_pair(const HElement& f, const TestFunction& phi, const CurrentOptions& opts) {
  return evaluate(Kind::Residue, f, phi, opts);
}

Complex pv_explicit_exp_minus_one(const TestFunction& phi, int grid, int angular) {
  // Zeros 2 pi i m of e^z - 1 that can meet the support.
  std::vector<Complex> centers;
  const double R = phi.radius + 1.0;
  const long lo = static_cast<long>(std::floor((phi.center.imag() - R) / (2 * M_PI)));
  const long hi = static_cast<long>(std::ceil((phi.center.imag() + R) / (2 * M_PI)));
  for (long m = lo; m <= hi; ++m) {
    Complex a(0, 2 * M_PI * static_cast<double>(m));
    if (std::abs(a - phi.center) <= R) centers.push_back(a);
  }
  auto sing = patches(centers, std::vector<int>(centers.size(), 1), 1, [](int, double) { return 2.0; });
  // -log|e^z - 1|^2 e^{-z} (d phi - phi), with e^z - 1 and e^{-z} given through w = z - a.
  auto density = [&](Complex z, Complex w) {
    Complex ph = phi(z), dph = phi.d_zeta(z);
    if (ph == Complex(0, 0) && dph == Complex(0, 0)) return Complex(0, 0);
    return -std::log(std::norm(expm1c(w))) * std::exp(-w) * (dph - ph);
  };
  Density outer = [&](Complex z, std::vector<Complex>& out) { out[0] = density(z, z); };
  InnerDensity inner = [&](size_t idx, Complex w, std::vector<Complex>& out) {
    out[0] = density(sing[idx].a + w, w) * std::norm(w);
  };
  return integrate(1, phi.center, phi.radius, grid, angular, sing, outer, inner)[0];
}

// ---------------------------------------------------------------------------
// Growth envelopes

std::vector<GrowthSample> sample_square(const std::function<Complex(Complex)>& g, double r, int n) {
  std::vector<GrowthSample> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex z(-r + 2 * r * i / (n - 1), -r + 2 * r * j / (n - 1));
      out.push_back({z, g(z)});
    }
  return out;
}

namespace {

struct Excess {
  double inner = -INFINITY, outer = -INFINITY, all = -INFINITY;
  size_t used = 0;
};

Excess excess(const std::vector<GrowthSample>& samples, const PolyC& w, int m, int n, double inner_fraction) {
  double rmax = 0;
  for (const auto& s : samples) rmax = std::max(rmax, std::abs(s.z));
  Excess e;
  for (const auto& s : samples) {
    const double v = std::abs(w.eval(s.z) * s.value);
    if (!(v > 0) || !std::isfinite(v)) continue;
    const double x = std::log(v) - m * std::log1p(std::abs(s.z)) - n * std::abs(s.z.real());
    e.all = std::max(e.all, x);
    const double r = std::abs(s.z);
    if (r > inner_fraction * rmax)
      e.outer = std::max(e.outer, x);
    else if (r >= 0.5 * inner_fraction * rmax)
      e.inner = std::max(e.inner, x);
    ++e.used;
  }
  return e;
}

}  // namespace

bool envelope_holds(const std::vector<GrowthSample>& samples, const PolyC& denom_witness, int m, int n,
                    const GrowthOptions& opts) {
  Excess e = excess(samples, denom_witness, m, n, opts.inner_fraction);
  if (e.used == 0) return true;
  if (!std::isfinite(e.inner)) throw Error(ErrorKind::Usage, "no usable samples in the inner fitting region");
  return e.outer <= e.inner + std::log(opts.slack);
}

GrowthCert pw_growth_fit(const std::vector<GrowthSample>& samples, const PolyC& denom_witness,
                         const GrowthOptions& opts) {
  for (const auto& s : samples)
    if (!std::isfinite(s.value.real()) || !std::isfinite(s.value.imag()))
      throw Error(ErrorKind::Usage, "growth samples must be finite");
  for (int n = 0; n <= opts.max_n; ++n)
    for (int m = 0; m <= opts.max_m; ++m) {
      if (!envelope_holds(samples, denom_witness, m, n, opts)) continue;
      Excess e = excess(samples, denom_witness, m, n, opts.inner_fraction);
      GrowthCert c;
      c.M = m;
      c.N = n;
      c.C = e.used ? std::exp(e.all) : 0.0;
      c.denom_witness = denom_witness;
      c.samples = e.used;
      c.worst_ratio = e.used ? std::exp(e.outer - e.inner) : 0.0;
      return c;
    }
  throw Error(ErrorKind::EnvelopeCapExceeded, "no envelope with M <= " + std::to_string(opts.max_m) +
                                                  " and N <= " + std::to_string(opts.max_n) + " dominates the samples");
}

}  // namespace ddelta
