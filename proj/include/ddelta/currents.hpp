#pragma once

// lambda-regularized principal value and residue pairings of 1/f* in one
// complex variable, the closed form for 1/(e^z - 1), and empirical growth
// envelopes C (1+|z|)^M e^{N |Re z|}.

#include <functional>
#include <string>
#include <vector>

#include "ddelta/charzeros.hpp"

namespace ddelta {

/// Smooth function on C vanishing outside the disk |z - center| < radius.
struct TestFunction {
  Complex center;
  double radius = 1;
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> d_zeta;     // d/dz = (d/dx - i d/dy) / 2
  std::function<Complex(Complex)> d_zetabar;  // d/dzbar

  Complex operator()(Complex z) const { return value(z); }
  /// Second derivatives by central differences of the first ones.
  Complex d_zeta2(Complex z) const;
  Complex d_zetabar2(Complex z) const;
  Complex d_mixed(Complex z) const;
};

/// P(z - c) exp(1 - 1/(1 - |z - c|^2 / r^2)) with P holomorphic.
TestFunction bump(Complex center, double radius, std::vector<Complex> poly = {1.0});
/// d phi / d zbar as a test function.
TestFunction dbar(const TestFunction& phi);
TestFunction operator+(const TestFunction& a, const TestFunction& b);
TestFunction operator*(Complex c, const TestFunction& a);

struct CurrentOptions {
  std::vector<double> lambdas{0.04, 0.02, 0.01, 0.005};
  int grid = 512;
  int angular = 128;
  /// Relative extrapolation residual above which the evaluation is rejected.
  double divergence_tol = 1e-2;
};

struct CurrentEval {
  Complex value;
  std::vector<double> lambda_schedule;
  std::vector<Complex> samples;  // I(lambda) per schedule entry
  double residual = 0;
  std::string normalization = "area measure dA = dx dy; residue_pair(z, phi) = pi phi(0)";
};

/// <|f*|^{2 lambda} / f*, phi> continued to lambda = 0.
CurrentEval pv_pair(const HElement& f, const TestFunction& phi, const CurrentOptions& opts = {});
/// lim lambda <|f*|^{2 lambda - 2} conj(f*') , phi>.
CurrentEval residue_pair(const HElement& f, const TestFunction& phi, const CurrentOptions& opts = {});

/// -integral of log|e^z - 1|^2 d/dz(e^{-z} phi) dA, the integrated-by-parts
/// form of v.p. 1/(e^z - 1) = e^{-z} d/dz log|e^z - 1|^2.
Complex pv_explicit_exp_minus_one(const TestFunction& phi, int grid = 512, int angular = 128);

struct GrowthSample {
  Complex z;
  Complex value;
};
/// Uniform n x n samples of g on [-r, r]^2.
std::vector<GrowthSample> sample_square(const std::function<Complex(Complex)>& g, double r, int n);

struct GrowthOptions {
  int max_m = 12;
  int max_n = 8;
  /// The excess log|R g| - log envelope on |z| > inner_fraction * max |z| may
  /// exceed its maximum on the shell [inner_fraction / 2, inner_fraction] * max |z|
  /// by at most this factor.
  double inner_fraction = 0.5;
  double slack = 1.5;
};

struct GrowthCert {
  double C = 0;
  int M = 0;
  int N = 0;
  PolyC denom_witness;
  size_t samples = 0;
  double worst_ratio = 0;  // outer over shell maximum of |R g| / envelope
};

/// Smallest N, then smallest M, whose envelope dominates |R g|. Throws
/// EnvelopeCapExceeded.
GrowthCert pw_growth_fit(const std::vector<GrowthSample>& samples, const PolyC& denom_witness,
                         const GrowthOptions& opts = {});
/// True when C (1+|z|)^M e^{N|Re z|} with the fitted C dominates the samples.
bool envelope_holds(const std::vector<GrowthSample>& samples, const PolyC& denom_witness, int m, int n,
                    const GrowthOptions& opts = {});

}  // namespace ddelta
