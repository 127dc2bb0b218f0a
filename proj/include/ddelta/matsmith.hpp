#pragma once

// Matrices over H and their Smith normal form.

#include <string>
#include <vector>

#include "ddelta/hring.hpp"

namespace ddelta {

class HMatrix {
 public:
  HMatrix() = default;
  HMatrix(int rows, int cols);
  explicit HMatrix(std::vector<std::vector<HElement>> entries);
  static HMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const HElement& operator()(int i, int j) const { return data_[idx(i, j)]; }
  HElement& operator()(int i, int j) { return data_[idx(i, j)]; }
  std::vector<std::vector<HElement>> entries() const;

  bool is_zero() const;
  bool is_diagonal() const;

  friend bool operator==(const HMatrix& a, const HMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const HMatrix& a, const HMatrix& b) { return !(a == b); }
  std::string to_string() const;

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j); }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<HElement> data_;
};

/// Throws DimensionMismatch.
HMatrix mat_mul(const HMatrix& a, const HMatrix& b);
HMatrix transpose(const HMatrix& a);

/// V * P * W = D with D diagonal, d_1 | d_2 | ... | d_r and V, W unimodular.
/// Nonzero d_i carry the trivial unit.
struct SmithDecomposition {
  HMatrix V, D, W;
  int rank = 0;
};

SmithDecomposition smith(const HMatrix& p, const BezoutOptions& opts = {});

/// Exact determinant by cofactor expansion. Throws DimensionMismatch.
HElement determinant(const HMatrix& a);

struct UnimodularResult {
  bool unimodular = false;
  HElement det;
  explicit operator bool() const { return unimodular; }
};
UnimodularResult is_unimodular(const HMatrix& v);

}  // namespace ddelta
