#pragma once

// Exponential-polynomial solutions of D-Delta operators, a method-of-steps
// simulator, least-squares spectral projection and the formal-series pairing.

#include <vector>

#include "ddelta/charzeros.hpp"
#include "ddelta/matsmith.hpp"

namespace ddelta {

/// P(x) e^{alpha x}; poly[k] is the x^k coefficient.
struct Mode {
  Complex alpha;
  std::vector<Complex> poly;
};

/// f(x) = sum of modes, with distinct alphas.
class ExpSolution {
 public:
  ExpSolution() = default;
  explicit ExpSolution(std::vector<Mode> modes);
  static ExpSolution monomial_mode(Complex alpha, int power = 0);

  const std::vector<Mode>& modes() const { return modes_; }
  bool is_zero() const { return modes_.empty(); }
  Complex operator()(double x) const;
  Complex derivative(double x, int order) const;
  double sup_norm(double a, double b, int samples = 257) const;

  friend ExpSolution operator+(const ExpSolution& a, const ExpSolution& b);
  friend ExpSolution operator*(Complex c, const ExpSolution& a);

 private:
  void normalize();
  std::vector<Mode> modes_;
};

/// Modewise closed form of q acting on u (z = d/dx, s = shift by +1, the
/// denominator inverted on each mode). Throws ResonantDenominator when the
/// denominator vanishes at a mode exponent.
ExpSolution apply_op(const HElement& q, const ExpSolution& u);
/// The same action through the Taylor expansion of q* at each exponent; valid
/// at every exponent because q* is entire.
ExpSolution apply_entire(const HElement& q, const ExpSolution& u);
/// Taylor coefficients q*^{(k)}(a)/k!, k < count.
std::vector<Complex> taylor_coefficients(const HElement& q, Complex a, int count);

struct SynthesisOptions {
  double residual_tol = 1e-6;
  ZeroOptions zeros;
};

/// x^j e^{alpha x}, j < m, for every zero cluster (alpha, m) of q* in rect.
/// Ordered by (Re alpha, Im alpha, j).
std::vector<ExpSolution> solution_basis_single(const HElement& q, const Rect& rect,
                                               const SynthesisOptions& opts = {});

struct VectorSolution {
  std::vector<ExpSolution> components;
  /// Set for generators of a zero column of D: any function may replace the
  /// constant placed in the free slot.
  bool free = false;
};
std::vector<VectorSolution> solution_basis_system(const HMatrix& p, const Rect& rect,
                                                  const SynthesisOptions& opts = {});

struct Trajectory {
  double x0 = 0;
  double step = 0;
  std::vector<Complex> values;
  double x(size_t i) const { return x0 + step * static_cast<double>(i); }
};

/// y^{(d)}(x) = -(1/c) [ lower-order terms at x + delayed terms ], obtained by
/// shifting q so that its highest sigma power carries the highest derivative.
struct RetardedForm {
  int order = 0;      // d
  int max_delay = 0;  // history length needed
  /// Rows by delay (0 = undelayed); each row holds derivative coefficients.
  std::vector<std::vector<Complex>> coeffs;
};
/// Throws NotRetarded.
RetardedForm retarded_form(const HElement& q);

/// RK4 segment by segment. init gives the history on [0, max_delay]; the
/// trajectory covers [0, horizon].
Trajectory method_of_steps(const HElement& q, const ExpSolution& init, double horizon, double step = 1.0 / 256);

struct Projection {
  std::vector<Complex> coefficients;
  double residual = 0;
  double condition = 0;
  bool ill_conditioned = false;
};
/// Least squares over the trajectory samples with x >= from.
Projection spectral_project(const Trajectory& traj, const std::vector<ExpSolution>& basis, double from = 0);

/// Truncated power series: coeffs[n] is known for n < coeffs.size().
struct FormalSeries {
  std::vector<GaussianRational> coeffs;
  int order() const { return static_cast<int>(coeffs.size()); }
};

FormalSeries series_mul_z(const FormalSeries& f);
FormalSeries series_mul_exp(const FormalSeries& f);

/// sum_n n! p_n f_n. Throws TruncationTooShort when f is not known beyond deg p.
GaussianRational pairing(const PolyC& p, const FormalSeries& f);

struct AdjointReport {
  GaussianRational derivative_lhs, derivative_rhs;  // <p', f>, <p, z f>
  GaussianRational shift_lhs, shift_rhs;            // <s p, f>, <p, e^z f>
  bool derivative_ok = false;
  bool shift_ok = false;
};
AdjointReport pairing_adjoint_check(const PolyC& p, const FormalSeries& f);

}  // namespace ddelta
