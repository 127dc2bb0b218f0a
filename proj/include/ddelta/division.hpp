#pragma once

// Hermite interpolation, ideal membership in H with explicit cofactors, and
// Taylor truncation of q* at a node.

#include <optional>
#include <vector>

#include "ddelta/currents.hpp"
#include "ddelta/hring.hpp"

namespace ddelta {

/// Derivative values f(node), f'(node), ..., f^{(m-1)}(node).
template <typename Scalar>
struct Jet {
  Scalar node;
  std::vector<Scalar> values;
};
using ExactJetSpec = std::vector<Jet<GaussianRational>>;
using JetSpec = std::vector<Jet<Complex>>;

/// The polynomial of degree < sum of jet lengths matching every jet. Throws
/// DuplicateNode.
PolyC hermite_interpolate(const ExactJetSpec& spec);
/// Coefficients in powers of z.
std::vector<Complex> hermite_interpolate(const JetSpec& spec);

struct MembershipResult {
  bool member = false;
  HElement gcd;
  std::vector<HElement> cofactors;  // sum cofactors[j] * gens[j] = h when member
  std::vector<GrowthCert> growth;
  bool identity_verified = false;
};
MembershipResult ideal_member(const HElement& h, const std::vector<HElement>& gens, const BezoutOptions& opts = {});

struct TruncationSplit {
  /// Taylor coefficients of P* at the node in powers of (z - node), degree < mu.
  std::vector<Complex> coeffs;
  /// Exact coefficients when the node is 0.
  std::optional<PolyC> exact;
  /// Order of vanishing of P* - P_trunc at the node (a lower bound when the
  /// exact series vanishes as far as it was expanded).
  int tail_order = 0;
  bool verified = false;
};
TruncationSplit truncation_split(const HElement& p, Complex node, int mu);

}  // namespace ddelta
