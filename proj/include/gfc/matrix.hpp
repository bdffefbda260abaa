#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/rat.hpp"

namespace gfc {

// Small dense matrices over an exact field (Rat) or doubles. Desk-scale
// dimensions only; elimination is plain Gaussian with partial pivoting.
template <class T>
class Mat {
 public:
  Mat() : r_(0), c_(0) {}
  Mat(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c, T(0)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const T& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * c_ + j];
  }

  bool operator==(const Mat& o) const {
    return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
  }

  Mat transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat operator+(const Mat& o) const {
    Mat s(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) s.a_[k] = a_[k] + o.a_[k];
    return s;
  }
  Mat operator-(const Mat& o) const {
    Mat s(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) s.a_[k] = a_[k] - o.a_[k];
    return s;
  }
  Mat operator-() const {
    Mat s(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) s.a_[k] = -a_[k];
    return s;
  }
  Mat operator*(const Mat& o) const {
    Mat p(r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const T& x = (*this)(i, k);
        if (x == T(0)) continue;
        for (int j = 0; j < o.c_; ++j) p(i, j) += x * o(k, j);
      }
    return p;
  }
  Mat operator*(const T& s) const {
    Mat p(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) p.a_[k] = a_[k] * s;
    return p;
  }

  Mat block(int i0, int j0, int nr, int nc) const {
    Mat b(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
  }
  void set_block(int i0, int j0, const Mat& b) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
  }

  std::vector<T> col(int j) const {
    std::vector<T> v(r_);
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!(x == T(0))) return false;
    return true;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& x : a_) m = std::max(m, std::abs(to_double(x)));
    return m;
  }

 private:
  int r_, c_;
  std::vector<T> a_;
};

template <class T>
Mat<T> hcat(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <class T>
Mat<T> vcat(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

template <class T>
Mat<T> block_diag(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

namespace detail {
inline bool negligible(const Rat& x, double) { return x == 0; }
inline bool negligible(double x, double scale) {
  return std::abs(x) <= 1e-12 * std::max(1.0, scale);
}
inline double pivot_size(const Rat& x) { return x == 0 ? 0.0 : 1.0; }
inline double pivot_size(double x) { return std::abs(x); }
}  // namespace detail

// Row echelon reduction in place; returns pivot columns. Exact over Rat;
// partial pivoting with a relative threshold over double.
template <class T>
std::vector<int> row_reduce(Mat<T>& m) {
  const double scale = m.max_abs();
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int best = -1;
    double best_sz = 0;
    for (int i = row; i < m.rows(); ++i) {
      double sz = detail::pivot_size(m(i, col));
      if (sz > best_sz) {
        best_sz = sz;
        best = i;
        if constexpr (std::is_same_v<T, Rat>) break;  // first nonzero pivot
      }
    }
    if (best < 0 || detail::negligible(m(best, col), scale)) continue;
    if (best != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(best, j));
    T inv = T(1) / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      T f = m(i, col);
      if (f == T(0)) continue;
      for (int j = col; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
int rank(Mat<T> m) {
  return static_cast<int>(row_reduce(m).size());
}

// Basis of the null space, one column per free variable.
template <class T>
Mat<T> kernel(Mat<T> m) {
  const int n = m.cols();
  std::vector<int> pivots = row_reduce(m);
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  int nfree = n - static_cast<int>(pivots.size());
  Mat<T> k(n, nfree);
  int idx = 0;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    k(j, idx) = T(1);
    for (size_t r = 0; r < pivots.size(); ++r)
      k(pivots[r], idx) = -m(static_cast<int>(r), j);
    ++idx;
  }
  return k;
}

// Solves a*x = b (a square, invertible); raises SingularMatrix otherwise.
template <class T>
Mat<T> solve(const Mat<T>& a, const Mat<T>& b) {
  require(a.rows() == a.cols() && a.rows() == b.rows(), "SchemaError",
          "solve: shape mismatch");
  Mat<T> aug = hcat(a, b);
  std::vector<int> piv = row_reduce(aug);
  require(static_cast<int>(piv.size()) == a.rows() &&
              (piv.empty() || piv.back() < a.cols()),
          "SingularMatrix", "solve: singular system");
  return aug.block(0, a.cols(), a.rows(), b.cols());
}

template <class T>
Mat<T> inverse(const Mat<T>& a) {
  return solve(a, Mat<T>::identity(a.rows()));
}

template <class T>
T det(Mat<T> m) {
  require(m.rows() == m.cols(), "SchemaError", "det: not square");
  T d(1);
  const double scale = m.max_abs();
  for (int col = 0; col < m.cols(); ++col) {
    int best = -1;
    double best_sz = 0;
    for (int i = col; i < m.rows(); ++i) {
      double sz = detail::pivot_size(m(i, col));
      if (sz > best_sz) {
        best_sz = sz;
        best = i;
        if constexpr (std::is_same_v<T, Rat>) break;
      }
    }
    if (best < 0 || detail::negligible(m(best, col), scale)) return T(0);
    if (best != col) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(col, j), m(best, j));
      d = -d;
    }
    d = d * m(col, col);
    T inv = T(1) / m(col, col);
    for (int i = col + 1; i < m.rows(); ++i) {
      T f = m(i, col) * inv;
      if (f == T(0)) continue;
      for (int j = col; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(col, j);
    }
  }
  return d;
}

using RMat = Mat<Rat>;
using DMat = Mat<double>;

RMat to_rational(const DMat&);  // exact binary-to-rational, for tests
DMat to_dmat(const RMat&);

}  // namespace gfc
