#include "ddelta/matsmith.hpp"

#include <sstream>
#include <tuple>

namespace ddelta {

HMatrix::HMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols)) {
  if (rows < 0 || cols < 0) throw Error(ErrorKind::DimensionMismatch, "negative matrix dimension");
}

HMatrix::HMatrix(std::vector<std::vector<HElement>> entries) {
  rows_ = static_cast<int>(entries.size());
  cols_ = rows_ ? static_cast<int>(entries[0].size()) : 0;
  for (auto& row : entries) {
    if (static_cast<int>(row.size()) != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    for (auto& e : row) data_.push_back(std::move(e));
  }
}

HMatrix HMatrix::identity(int n) {
  HMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = HElement(GaussianRational(1));
  return m;
}

std::vector<std::vector<HElement>> HMatrix::entries() const {
  std::vector<std::vector<HElement>> out(static_cast<size_t>(rows_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[static_cast<size_t>(i)].push_back((*this)(i, j));
  return out;
}

bool HMatrix::is_zero() const {
  for (const auto& e : data_)
    if (!e.is_zero()) return false;
  return true;
}

bool HMatrix::is_diagonal() const {
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (i != j && !(*this)(i, j).is_zero()) return false;
  return true;
}

std::string HMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

HMatrix mat_mul(const HMatrix& a, const HMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::DimensionMismatch, "cannot multiply " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                                                  std::to_string(b.cols()));
  HMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      HElement acc;
      for (int k = 0; k < a.cols(); ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) acc = acc + a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

HMatrix transpose(const HMatrix& a) {
  HMatrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

namespace {

// Row operations act on the working matrix and on V; column operations on the
// working matrix and on W.
struct Reducer {
  HMatrix a, v, w;
  BezoutOptions opts;

  void swap_rows(int i, int k) {
    for (int j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
    for (int j = 0; j < v.cols(); ++j) std::swap(v(i, j), v(k, j));
  }
  void swap_cols(int j, int k) {
    for (int i = 0; i < a.rows(); ++i) std::swap(a(i, j), a(i, k));
    for (int i = 0; i < w.rows(); ++i) std::swap(w(i, j), w(i, k));
  }

  // rows (t, i) <- [[p, q], [r, s]] * rows (t, i)
  static void mix_rows(HMatrix& m, int t, int i, const HElement& p, const HElement& q, const HElement& r,
                       const HElement& s) {
    for (int j = 0; j < m.cols(); ++j) {
      HElement x = m(t, j), y = m(i, j);
      m(t, j) = p * x + q * y;
      m(i, j) = r * x + s * y;
    }
  }
  static void mix_cols(HMatrix& m, int t, int j, const HElement& p, const HElement& q, const HElement& r,
                       const HElement& s) {
    for (int i = 0; i < m.rows(); ++i) {
      HElement x = m(i, t), y = m(i, j);
      m(i, t) = p * x + q * y;
      m(i, j) = r * x + s * y;
    }
  }

  // Clears a(i, t) against the pivot a(t, t) with a row operation.
  void clear_row(int t, int i) {
    const HElement one(GaussianRational(1));
    const HElement piv = a(t, t), b = a(i, t);
    if (auto q = h_divides(piv, b)) {
      mix_rows(a, t, i, one, HElement(), -*q.quotient, one);
      mix_rows(v, t, i, one, HElement(), -*q.quotient, one);
      return;
    }
    auto bz = h_bezout(piv, b, opts);
    HElement x = -*h_divides(bz.g, b).quotient;
    HElement y = *h_divides(bz.g, piv).quotient;
    mix_rows(a, t, i, bz.u, bz.v, x, y);
    mix_rows(v, t, i, bz.u, bz.v, x, y);
  }

  // Clears a(t, j) with a column operation.
  void clear_col(int t, int j) {
    const HElement one(GaussianRational(1));
    const HElement piv = a(t, t), b = a(t, j);
    if (auto q = h_divides(piv, b)) {
      mix_cols(a, t, j, one, HElement(), -*q.quotient, one);
      mix_cols(w, t, j, one, HElement(), -*q.quotient, one);
      return;
    }
    auto bz = h_bezout(piv, b, opts);
    HElement x = -*h_divides(bz.g, b).quotient;
    HElement y = *h_divides(bz.g, piv).quotient;
    mix_cols(a, t, j, bz.u, bz.v, x, y);
    mix_cols(w, t, j, bz.u, bz.v, x, y);
  }

  bool find_pivot(int t) {
    bool found = false;
    std::tuple<int, int, int, int, int> best;
    int bi = t, bj = t;
    for (int i = t; i < a.rows(); ++i)
      for (int j = t; j < a.cols(); ++j) {
        const HElement& e = a(i, j);
        if (e.is_zero()) continue;
        auto key = std::make_tuple(e.num().sigma_span(), e.num().z_degree(), e.den().degree(), i, j);
        if (!found || key < best) {
          best = key;
          bi = i;
          bj = j;
          found = true;
        }
      }
    if (!found) return false;
    if (bi != t) swap_rows(bi, t);
    if (bj != t) swap_cols(bj, t);
    return true;
  }

  void reduce_at(int t) {
    for (;;) {
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (int i = t + 1; i < a.rows(); ++i)
          if (!a(i, t).is_zero()) clear_row(t, i);
        for (int j = t + 1; j < a.cols(); ++j)
          if (!a(t, j).is_zero()) {
            clear_col(t, j);
            dirty = true;
          }
        if (dirty) {
          dirty = false;
          for (int i = t + 1; i < a.rows(); ++i)
            if (!a(i, t).is_zero()) dirty = true;
        }
      }
      int bad = -1;
      for (int i = t + 1; i < a.rows() && bad < 0; ++i)
        for (int j = t + 1; j < a.cols(); ++j)
          if (!a(i, j).is_zero() && !h_divides(a(t, t), a(i, j))) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      const HElement one(GaussianRational(1));
      mix_rows(a, t, bad, one, one, HElement(), one);
      mix_rows(v, t, bad, one, one, HElement(), one);
    }
    const Unit& u = a(t, t).unit();
    HElement inv = h_unit(Unit{u.c.inverse(), -u.k});
    for (int j = 0; j < a.cols(); ++j) a(t, j) = inv * a(t, j);
    for (int j = 0; j < v.cols(); ++j) v(t, j) = inv * v(t, j);
  }
};

}  // namespace

SmithDecomposition smith(const HMatrix& p, const BezoutOptions& opts) {
  Reducer r{p, HMatrix::identity(p.rows()), HMatrix::identity(p.cols()), opts};
  int rank = 0;
  const int n = std::min(p.rows(), p.cols());
  for (int t = 0; t < n; ++t) {
    if (!r.find_pivot(t)) break;
    r.reduce_at(t);
    ++rank;
  }
  SmithDecomposition out{r.v, r.a, r.w, rank};
  if (mat_mul(mat_mul(out.V, p), out.W) != out.D || !out.D.is_diagonal())
    throw Error(ErrorKind::NoRationalCofactors, "internal: Smith reduction failed re-verification");
  return out;
}

HElement determinant(const HMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  const int n = a.rows();
  if (n == 0) return HElement(GaussianRational(1));
  if (n == 1) return a(0, 0);
  HElement det;
  for (int j = 0; j < n; ++j) {
    if (a(0, j).is_zero()) continue;
    HMatrix minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i)
      for (int k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = a(i, k);
    HElement term = a(0, j) * determinant(minor);
    det = (j % 2) ? det - term : det + term;
  }
  return det;
}

UnimodularResult is_unimodular(const HMatrix& v) {
  UnimodularResult r;
  r.det = determinant(v);
  r.unimodular = r.det.is_unit();
  return r;
}

}  // namespace ddelta
