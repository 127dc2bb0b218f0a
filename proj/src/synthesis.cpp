#include "ddelta/synthesis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace ddelta {

namespace {

using CPoly = std::vector<Complex>;

void trim(CPoly& p) {
  while (!p.empty() && p.back() == Complex(0, 0)) p.pop_back();
}

CPoly cderiv(const CPoly& p) {
  CPoly d;
  for (size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<double>(k));
  return d;
}

Complex ceval(const CPoly& p, double x) {
  Complex acc{0, 0};
  for (size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

// p(x + s) by repeated synthetic division.
CPoly cshift(CPoly p, double s) {
  const size_t n = p.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t k = n - 1; k > i; --k) p[k - 1] += s * p[k];
  return p;
}

void add_to(CPoly& acc, const CPoly& p, Complex c) {
  if (acc.size() < p.size()) acc.resize(p.size());
  for (size_t k = 0; k < p.size(); ++k) acc[k] += c * p[k];
}

CPoly to_cpoly(const PolyC& p) {
  CPoly out;
  for (const auto& c : p.coeffs()) out.push_back(c.to_complex());
  return out;
}

// sum_k c_k P^{(k)}.
CPoly taylor_action(const std::vector<Complex>& c, const CPoly& p) {
  CPoly acc, d = p;
  for (size_t k = 0; k < c.size() && !d.empty(); ++k) {
    add_to(acc, d, c[k]);
    d = cderiv(d);
  }
  return acc;
}

// Taylor coefficients of a polynomial at a.
std::vector<Complex> poly_taylor(const PolyC& p, Complex a, int count) {
  std::vector<Complex> out;
  PolyC d = p;
  double fact = 1;
  for (int k = 0; k < count; ++k) {
    if (k > 0) fact *= k;
    out.push_back(d.eval(a) / fact);
    d = d.derivative();
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ExpSolution

ExpSolution::ExpSolution(std::vector<Mode> modes) : modes_(std::move(modes)) { normalize(); }

ExpSolution ExpSolution::monomial_mode(Complex alpha, int power) {
  Mode m{alpha, CPoly(static_cast<size_t>(power) + 1, Complex(0, 0))};
  m.poly.back() = 1.0;
  return ExpSolution({m});
}

void ExpSolution::normalize() {
  std::vector<Mode> merged;
  for (auto& m : modes_) {
    trim(m.poly);
    if (m.poly.empty()) continue;
    bool done = false;
    for (auto& e : merged)
      if (std::abs(e.alpha - m.alpha) <= 1e-12 * std::max(1.0, std::abs(m.alpha))) {
        add_to(e.poly, m.poly, 1.0);
        done = true;
        break;
      }
    if (!done) merged.push_back(std::move(m));
  }
  for (auto& m : merged) trim(m.poly);
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Mode& m) { return m.poly.empty(); }),
               merged.end());
  std::sort(merged.begin(), merged.end(), [](const Mode& a, const Mode& b) {
    if (a.alpha.real() != b.alpha.real()) return a.alpha.real() < b.alpha.real();
    return a.alpha.imag() < b.alpha.imag();
  });
  modes_ = std::move(merged);
}

Complex ExpSolution::operator()(double x) const { return derivative(x, 0); }

Complex ExpSolution::derivative(double x, int order) const {
  Complex acc{0, 0};
  for (const auto& m : modes_) {
    CPoly p = m.poly;
    for (int k = 0; k < order; ++k) {
      CPoly d = cderiv(p);
      add_to(d, p, m.alpha);
      p = std::move(d);
    }
    acc += ceval(p, x) * std::exp(m.alpha * x);
  }
  return acc;
}

double ExpSolution::sup_norm(double a, double b, int samples) const {
  double m = 0;
  for (int i = 0; i < samples; ++i) m = std::max(m, std::abs((*this)(a + (b - a) * i / (samples - 1))));
  return m;
}

ExpSolution operator+(const ExpSolution& a, const ExpSolution& b) {
  std::vector<Mode> all = a.modes_;
  all.insert(all.end(), b.modes_.begin(), b.modes_.end());
  return ExpSolution(std::move(all));
}

ExpSolution operator*(Complex c, const ExpSolution& a) {
  std::vector<Mode> all = a.modes_;
  for (auto& m : all)
    for (auto& x : m.poly) x *= c;
  return ExpSolution(std::move(all));
}

// ---------------------------------------------------------------------------
// Operator action

std::vector<Complex> taylor_coefficients(const HElement& q, Complex a, int count) {
  std::vector<Complex> out(static_cast<size_t>(std::max(count, 0)), Complex(0, 0));
  if (q.is_zero() || count <= 0) return out;
  const ExpPoly f = q.full_numerator();
  if (q.den().degree() == 0) {
    ExpPoly d = f;
    double fact = 1;
    const Complex den = q.den()[0].to_complex();
    for (int k = 0; k < count; ++k) {
      if (k > 0) fact *= k;
      out[static_cast<size_t>(k)] = ep_eval(d, a) / (fact * den);
      d = ep_derivative(d);
    }
    return out;
  }
  // Cauchy integrals on a circle that keeps away from the removable poles.
  const auto roots = numeric_roots(q.den());
  constexpr int kN = 128;
  double rho = 1.0;
  for (double r : {1.0, 1.5, 0.75, 2.0, 3.0, 0.5}) {
    bool ok = true;
    for (int n = 0; n < kN && ok; ++n) {
      Complex w = a + std::polar(r, 2 * M_PI * n / kN);
      for (Complex root : roots) ok = ok && std::abs(w - root) >= 0.25;
    }
    if (ok) {
      rho = r;
      break;
    }
  }
  CompiledExpPoly cf(f);
  std::vector<Complex> vals(kN);
  for (int n = 0; n < kN; ++n) {
    Complex w = a + std::polar(rho, 2 * M_PI * n / kN);
    vals[static_cast<size_t>(n)] = cf(w) / q.den().eval(w);
  }
  for (int k = 0; k < count; ++k) {
    Complex acc{0, 0};
    for (int n = 0; n < kN; ++n) acc += vals[static_cast<size_t>(n)] * std::polar(1.0, -2 * M_PI * n * k / kN);
    out[static_cast<size_t>(k)] = acc / (kN * std::pow(rho, k));
  }
  return out;
}

ExpSolution apply_entire(const HElement& q, const ExpSolution& u) {
  std::vector<Mode> out;
  for (const auto& m : u.modes()) {
    auto c = taylor_coefficients(q, m.alpha, static_cast<int>(m.poly.size()));
    out.push_back({m.alpha, taylor_action(c, m.poly)});
  }
  return ExpSolution(std::move(out));
}

ExpSolution apply_op(const HElement& q, const ExpSolution& u) {
  const ExpPoly f = q.full_numerator();
  std::vector<Mode> out;
  for (const auto& m : u.modes()) {
    const int n = static_cast<int>(m.poly.size());
    CPoly r;
    for (const auto& [j, p] : f.terms()) {
      CPoly qj = taylor_action(poly_taylor(p, m.alpha, n), m.poly);
      add_to(r, cshift(qj, j), std::exp(m.alpha * static_cast<double>(j)));
    }
    if (q.den().degree() > 0) {
      auto c = poly_taylor(q.den(), m.alpha, n);
      double scale = 0;
      for (auto x : poly_taylor(q.den(), m.alpha, q.den().degree() + 1)) scale += std::abs(x);
      if (std::abs(c[0]) <= 1e-12 * std::max(1.0, scale))
        throw Error(ErrorKind::ResonantDenominator, "denominator " + q.den().to_string() +
                                                        " vanishes at the mode exponent (" +
                                                        std::to_string(m.alpha.real()) + ", " +
                                                        std::to_string(m.alpha.imag()) + ")");
      // Solve phi(alpha + D) g = r; D is nilpotent on polynomials of degree < n.
      CPoly g(r.size(), Complex(0, 0));
      for (size_t it = 0; it <= r.size(); ++it) {
        CPoly rhs = r;
        CPoly d = g;
        for (size_t k = 1; k < c.size() && !d.empty(); ++k) {
          d = cderiv(d);
          add_to(rhs, d, -c[k]);
        }
        for (auto& x : rhs) x /= c[0];
        g = rhs;
      }
      r = g;
    } else {
      const Complex d0 = q.den()[0].to_complex();
      for (auto& x : r) x /= d0;
    }
    out.push_back({m.alpha, r});
  }
  return ExpSolution(std::move(out));
}

// ---------------------------------------------------------------------------
// Solution bases

std::vector<ExpSolution> solution_basis_single(const HElement& q, const Rect& rect, const SynthesisOptions& opts) {
  if (q.is_zero()) throw Error(ErrorKind::DivisionByZero, "solution basis of the zero operator");
  std::vector<ExpSolution> out;
  for (const auto& c : find_zeros(q, rect, opts.zeros))
    for (int j = 0; j < c.multiplicity; ++j) {
      ExpSolution u = ExpSolution::monomial_mode(c.center, j);
      double res = apply_entire(q, u).sup_norm(0, 1);
      if (res >= opts.residual_tol * std::max(1.0, u.sup_norm(0, 1)))
        throw Error(ErrorKind::NonConvergence, "basis solution residual " + std::to_string(res) + " exceeds tolerance");
      out.push_back(std::move(u));
    }
  return out;
}

std::vector<VectorSolution> solution_basis_system(const HMatrix& p, const Rect& rect, const SynthesisOptions& opts) {
  const auto s = smith(p);
  const int n = p.cols();
  std::vector<VectorSolution> vs;
  auto lift = [&](int col, const ExpSolution& v, bool free) {
    VectorSolution u;
    u.free = free;
    for (int r = 0; r < n; ++r) u.components.push_back(apply_entire(s.W(r, col), v));
    vs.push_back(std::move(u));
  };
  for (int i = 0; i < s.rank; ++i)
    for (const auto& v : solution_basis_single(s.D(i, i), rect, opts)) lift(i, v, false);
  for (int i = s.rank; i < n; ++i) lift(i, ExpSolution::monomial_mode(0.0), true);
  for (const auto& u : vs) {
    double scale = 1;
    for (const auto& c : u.components) scale = std::max(scale, c.sup_norm(0, 1));
    for (int r = 0; r < p.rows(); ++r) {
      ExpSolution acc;
      for (int c = 0; c < n; ++c) acc = acc + apply_entire(p(r, c), u.components[static_cast<size_t>(c)]);
      double res = acc.sup_norm(0, 1);
      if (res >= opts.residual_tol * scale)
        throw Error(ErrorKind::NonConvergence, "system solution residual " + std::to_string(res) + " exceeds tolerance");
    }
  }
  return vs;
}

// ---------------------------------------------------------------------------
// Method of steps

RetardedForm retarded_form(const HElement& q) {
  if (q.is_zero()) throw Error(ErrorKind::NotRetarded, "zero operator");
  const ExpPoly f = q.full_numerator();
  const int top = f.sigma_degree();
  const int low = f.valuation();
  RetardedForm rf;
  rf.order = f.coeff(top).degree();
  rf.max_delay = top - low;
  for (int delay = 0; delay <= rf.max_delay; ++delay) {
    const PolyC p = f.coeff(top - delay);
    if (delay > 0 && !p.is_zero() && p.degree() >= rf.order && rf.order > 0)
      throw Error(ErrorKind::NotRetarded, "delayed term " + p.to_string() + " has derivative order >= " +
                                              std::to_string(rf.order) + " (neutral or advanced equation)");
    if (delay > 0 && rf.order == 0 && p.degree() > 0)
      throw Error(ErrorKind::NotRetarded, "difference equation with derivatives in delayed terms");
    rf.coeffs.push_back(to_cpoly(p));
  }
  if (rf.order == 0 && rf.max_delay == 0) throw Error(ErrorKind::NotRetarded, "operator has no dynamics");
  return rf;
}

Trajectory method_of_steps(const HElement& q, const ExpSolution& init, double horizon, double step) {
  const RetardedForm rf = retarded_form(q);
  const double per = std::round(1.0 / step);
  if (step <= 0 || std::abs(per * step - 1.0) > 1e-12)
    throw Error(ErrorKind::Usage, "step must be 1/n for a positive integer n");
  const size_t n_per = static_cast<size_t>(per);
  const int d = rf.order;
  const double L = rf.max_delay;
  const size_t total = static_cast<size_t>(std::floor(horizon * per + 1e-9)) + 1;
  const size_t hist = static_cast<size_t>(rf.max_delay) * n_per;

  Trajectory tr{0.0, step, std::vector<Complex>(total)};
  // comp[k][i] = y^{(k)}(i h) for k <= d.
  std::vector<std::vector<Complex>> comp(static_cast<size_t>(d) + 1, std::vector<Complex>(std::max(total, hist + 1)));
  const Complex lead = rf.coeffs[0].empty() ? Complex(0, 0) : rf.coeffs[0][static_cast<size_t>(d)];

  // y^{(k)} at x <= current time; history from init, later from the grid.
  auto lookup = [&](double x, int k) -> Complex {
    // A pure recursion takes its history on [0, L) only.
    if (d == 0 ? x < L - 1e-9 : x <= L + 1e-12) return init.derivative(x, k);
    double s = x * per;
    size_t i = static_cast<size_t>(std::floor(s));
    double t = s - static_cast<double>(i);
    if (t < 1e-12) return comp[static_cast<size_t>(k)][i];
    // Cubic Hermite from values and derivatives at both grid ends.
    Complex y0 = comp[static_cast<size_t>(k)][i], y1 = comp[static_cast<size_t>(k)][i + 1];
    Complex m0 = comp[static_cast<size_t>(k) + 1][i] * step, m1 = comp[static_cast<size_t>(k) + 1][i + 1] * step;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  };

  auto delayed = [&](double x) {
    Complex acc{0, 0};
    for (size_t delay = 1; delay < rf.coeffs.size(); ++delay)
      for (size_t k = 0; k < rf.coeffs[delay].size(); ++k)
        if (rf.coeffs[delay][k] != Complex(0, 0))
          acc += rf.coeffs[delay][k] * lookup(x - static_cast<double>(delay), static_cast<int>(k));
    return acc;
  };

  if (d == 0) {
    for (size_t i = 0; i < total; ++i) {
      double x = static_cast<double>(i) * step;
      comp[0][i] = (i < hist) ? init(x) : -delayed(x) / lead;
      tr.values[i] = comp[0][i];
    }
    return tr;
  }

  auto top = [&](double x, const std::vector<Complex>& y) {
    Complex acc = delayed(x);
    for (int k = 0; k < d; ++k) acc += rf.coeffs[0][static_cast<size_t>(k)] * y[static_cast<size_t>(k)];
    return -acc / lead;
  };
  auto rhs = [&](double x, const std::vector<Complex>& y) {
    std::vector<Complex> dy(static_cast<size_t>(d));
    for (int k = 0; k + 1 < d; ++k) dy[static_cast<size_t>(k)] = y[static_cast<size_t>(k) + 1];
    dy[static_cast<size_t>(d) - 1] = top(x, y);
    return dy;
  };

  for (size_t i = 0; i <= std::min(hist, total - 1); ++i) {
    double x = static_cast<double>(i) * step;
    for (int k = 0; k <= d; ++k) comp[static_cast<size_t>(k)][i] = init.derivative(x, k);
  }
  std::vector<Complex> y(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) y[static_cast<size_t>(k)] = comp[static_cast<size_t>(k)][hist];
  // The right-hand derivative at the junction follows the equation.
  if (hist < total) comp[static_cast<size_t>(d)][hist] = top(L, y);
  auto axpy = [](const std::vector<Complex>& a, const std::vector<Complex>& b, double s) {
    std::vector<Complex> r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] + s * b[k];
    return r;
  };
  for (size_t i = hist; i + 1 < total; ++i) {
    double x = static_cast<double>(i) * step;
    auto k1 = rhs(x, y);
    auto k2 = rhs(x + step / 2, axpy(y, k1, step / 2));
    auto k3 = rhs(x + step / 2, axpy(y, k2, step / 2));
    auto k4 = rhs(x + step, axpy(y, k3, step));
    for (size_t k = 0; k < y.size(); ++k) y[k] += step / 6 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    for (int k = 0; k < d; ++k) comp[static_cast<size_t>(k)][i + 1] = y[static_cast<size_t>(k)];
    comp[static_cast<size_t>(d)][i + 1] = top(x + step, y);
  }
  for (size_t i = 0; i < total; ++i) tr.values[i] = comp[0][i];
  return tr;
}

// ---------------------------------------------------------------------------
// Projection

Projection spectral_project(const Trajectory& traj, const std::vector<ExpSolution>& basis, double from) {
  if (basis.empty()) throw Error(ErrorKind::Usage, "spectral projection needs a nonempty basis");
  std::vector<size_t> rows;
  for (size_t i = 0; i < traj.values.size(); ++i)
    if (traj.x(i) >= from - 1e-12) rows.push_back(i);
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(basis.size()));
  Eigen::VectorXcd y(static_cast<Eigen::Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    y(static_cast<Eigen::Index>(r)) = traj.values[rows[r]];
    for (size_t c = 0; c < basis.size(); ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = basis[c](traj.x(rows[r]));
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Projection p;
  double smax = sv.size() ? sv(0) : 0, smin = sv.size() ? sv(sv.size() - 1) : 0;
  p.condition = smin > 0 ? (smax / smin) * (smax / smin) : std::numeric_limits<double>::infinity();
  p.ill_conditioned = p.condition > 1e12;
  Eigen::VectorXcd c = svd.solve(y);
  for (Eigen::Index k = 0; k < c.size(); ++k) p.coefficients.push_back(c(k));
  p.residual = std::sqrt(traj.step) * (a * c - y).norm();
  return p;
}

// ---------------------------------------------------------------------------
// Pairing

FormalSeries series_mul_z(const FormalSeries& f) {
  FormalSeries g;
  g.coeffs.push_back(GaussianRational(0));
  g.coeffs.insert(g.coeffs.end(), f.coeffs.begin(), f.coeffs.end());
  return g;
}

FormalSeries series_mul_exp(const FormalSeries& f) {
  FormalSeries g;
  std::vector<GaussianRational> inv_fact;
  mpz_class fact = 1;
  for (int n = 0; n < f.order(); ++n) {
    if (n > 0) fact *= n;
    inv_fact.emplace_back(mpq_class(mpz_class(1), fact), mpq_class(0));
  }
  for (int m = 0; m < f.order(); ++m) {
    GaussianRational acc;
    for (int k = 0; k <= m; ++k) acc += f.coeffs[static_cast<size_t>(k)] * inv_fact[static_cast<size_t>(m - k)];
    g.coeffs.push_back(acc);
  }
  return g;
}

GaussianRational pairing(const PolyC& p, const FormalSeries& f) {
  if (p.is_zero()) return GaussianRational(0);
  if (f.order() <= p.degree())
    throw Error(ErrorKind::TruncationTooShort, "series known to order " + std::to_string(f.order()) +
                                                   " but the polynomial has degree " + std::to_string(p.degree()));
  GaussianRational acc;
  mpz_class fact = 1;
  for (int n = 0; n <= p.degree(); ++n) {
    if (n > 0) fact *= n;
    acc += GaussianRational(mpq_class(fact), mpq_class(0)) * p[n] * f.coeffs[static_cast<size_t>(n)];
  }
  return acc;
}

AdjointReport pairing_adjoint_check(const PolyC& p, const FormalSeries& f) {
  AdjointReport r;
  r.derivative_lhs = pairing(p.derivative(), f);
  r.derivative_rhs = pairing(p, series_mul_z(f));
  r.shift_lhs = pairing(p.shifted(GaussianRational(1)), f);
  r.shift_rhs = pairing(p, series_mul_exp(f));
  r.derivative_ok = r.derivative_lhs == r.derivative_rhs;
  r.shift_ok = r.shift_lhs == r.shift_rhs;
  return r;
}

}  // namespace ddelta
