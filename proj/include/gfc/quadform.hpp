#pragma once

#include <vector>

#include "gfc/matrix.hpp"
#include "gfc/rng.hpp"

namespace gfc {

// Non-degenerate quadratic form q(v) = v^T mat v with exact rational entries.
// The 0-dimensional form is the monoid unit. Generic over the scalar so the
// path-lifting machinery can run the same formulas on doubles; invariants are
// exact-only.
template <class T>
struct QForm {
  Mat<T> mat;  // symmetric dim x dim

  QForm() : mat(0, 0) {}
  explicit QForm(Mat<T> m) : mat(std::move(m)) {}

  int dim() const { return mat.rows(); }

  bool operator==(const QForm& o) const { return mat == o.mat; }

  T eval(const std::vector<T>& v) const {
    T s(0);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) s += v[i] * mat(i, j) * v[j];
    return s;
  }

  // gradient 2*A*v
  std::vector<T> grad(const std::vector<T>& v) const {
    std::vector<T> g(dim(), T(0));
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) g[i] += T(2) * mat(i, j) * v[j];
    return g;
  }
};

using QuadForm = QForm<Rat>;
using QFormD = QForm<double>;

struct QInvariants {
  int dim = 0;
  int index = 0;
  int coindex = 0;
  int signature = 0;
  bool operator==(const QInvariants&) const = default;
};

template <class T>
QForm<T> direct_sum(const QForm<T>& a, const QForm<T>& b) {
  return QForm<T>(block_diag(a.mat, b.mat));
}

template <class T>
QForm<T> negate(const QForm<T>& q) {
  return QForm<T>(-q.mat);
}

// h(x1,x2) = x1*x2 repeated k times: dim 2k, signature 0, index k.
QuadForm hyperbolic(int k);
QFormD hyperbolic_d(int k);

bool is_symmetric(const QuadForm& q);
bool is_nondegenerate(const QuadForm& q);
void check_quadform(const QuadForm& q);  // raises DegenerateForm / SchemaError

// Exact (dim, index, coindex, signature) via rational symmetric elimination;
// ties in pivot selection broken by smallest row index.
QInvariants invariants(const QuadForm& q);

// (q o sigma)(v) = q(sigma(v)); sigma[i] = image of i under the permutation.
QuadForm permute(const QuadForm& q, const std::vector<int>& sigma);

// c(t)*a + s(t)*b along the rational quarter-circle c = (1-t^2)/(1+t^2),
// s = 2t/(1+t^2); same arc of forms as the cosine interpolation of forms,
// exact at rational t. Endpoints reproduce a (t=0) and b (t=1).
QuadForm homotopy_to_hyperbolic(const QuadForm& a, const QuadForm& b,
                                const Rat& t);

// Test oracle: eigenvalue count by Sturm sequences on the exact
// characteristic polynomial (independent of the elimination route).
int index_by_sturm(const QuadForm& q);

// Random non-degenerate form of dimension n; entries small rationals with
// spectral normalization ||2A||_inf <= 1 (the regime where the cut-off
// gradient bound holds, see cutoff.hpp).
QuadForm random_form(SplitMix64& rng, int n);

}  // namespace gfc
