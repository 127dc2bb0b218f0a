#pragma once

// Zeros of q* in rectangles by the argument principle.

#include <vector>

#include "ddelta/hring.hpp"

namespace ddelta {

struct Rect {
  double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
  Rect() = default;
  Rect(double a, double b, double c, double d);
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  double diameter() const;
  bool contains(Complex z) const;
  Rect inflated(double d) const { return {re_min - d, re_max + d, im_min - d, im_max + d}; }
};

struct ZeroCluster {
  Complex center;
  int multiplicity = 0;
  double radius = 0;
};

struct ZeroOptions {
  double tol = 1e-9;
  int max_depth = 60;
};

/// Zeros of q* in rect with multiplicity. Throws BoundaryZero when q* (nearly)
/// vanishes on the boundary, NonConvergence when the winding integral does
/// not settle near an integer.
int count_zeros(const HElement& q, const Rect& rect);

/// Sorted by (Re, Im) of the center. Multiplicities sum to count_zeros.
std::vector<ZeroCluster> find_zeros(const HElement& q, const Rect& rect, const ZeroOptions& opts = {});

/// Winding number of q* on a small circle around point (radius max(tol,
/// 1e-4)).
int vanishing_order(const HElement& q, Complex point, double tol = 1e-9);

}  // namespace ddelta
