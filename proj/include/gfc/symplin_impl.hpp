#pragma once

// template bodies for symplin.hpp; include via symplin.hpp only

#include "gfc/symplin.hpp"

namespace gfc {

namespace detail {
template <class T>
bool full_column_rank(const Mat<T>& m) {
  if constexpr (std::is_same_v<T, double>) {
    if (m.cols() == 0) return true;
    return min_singular_value(m) > 1e-8 * std::max(1.0, max_singular_value(m));
  } else {
    return rank(m) == m.cols();
  }
}

template <class T>
bool matrices_close(const Mat<T>& a, const Mat<T>& b, double tol) {
  if constexpr (std::is_same_v<T, double>) {
    double scale = std::max({1.0, a.max_abs(), b.max_abs()});
    return (a - b).max_abs() <= tol * scale;
  } else {
    return a == b;
  }
}
}  // namespace detail

template <class T>
bool is_isotropic(const Lagr<T>& l, double tol) {
  Mat<T> q = l.basis.transpose() * omega_matrix<T>(l.half_dim()) * l.basis;
  if constexpr (std::is_same_v<T, double>)
    return q.max_abs() <= tol * std::max(1.0, l.basis.max_abs());
  else
    return q.is_zero();
}

template <class T>
void check_lagrangian(const Lagr<T>& l) {
  require(l.basis.rows() == 2 * l.half_dim() &&
              l.basis.cols() == l.half_dim(),
          "SchemaError", "lagrangian basis shape mismatch");
  require(detail::full_column_rank(l.basis), "SchemaError",
          "lagrangian basis not of full column rank");
  require(is_isotropic(l), "SchemaError", "basis is not isotropic");
}

template <class T>
Lagr<T> graph_of_form(const QForm<T>& q) {
  const int k = q.dim();
  Mat<T> b(2 * k, k);
  b.set_block(0, 0, Mat<T>::identity(k));
  b.set_block(k, 0, q.mat * T(2));
  return Lagr<T>{0, k, b};
}

template <class T>
bool is_transverse(const Lagr<T>& a, const Lagr<T>& b) {
  require(a.half_dim() == b.half_dim(), "SchemaError",
          "transversality: ambient dimension mismatch");
  Mat<T> c = hcat(a.basis, b.basis);
  if constexpr (std::is_same_v<T, double>)
    return min_singular_value(c) > 1e-8 * max_singular_value(c);
  else
    return rank(c) == 2 * a.half_dim();
}

template <class T>
bool equal_subspace(const Mat<T>& a, const Mat<T>& b) {
  if (a.rows() != b.rows()) return false;
  if constexpr (std::is_same_v<T, double>) {
    return principal_angle_max(a, b) < 1e-8;
  } else {
    int ra = rank(a), rb = rank(b);
    return ra == rb && rank(hcat(a, b)) == ra;
  }
}

template <class T>
Lagr<T> reduce(const Lagr<T>& phi) {
  const int N = phi.half_dim(), m = phi.m, n = phi.n;
  // phi  cap  (E x R^n): kill the eta-rows (Y_j, j >= m)
  Mat<T> constraint = phi.basis.block(N + m, 0, n, N);
  Mat<T> ker = kernel(constraint);
  require(ker.cols() == m, "NotTransverse",
          "subspace not transverse to E x R^n (intersection dim " +
              std::to_string(ker.cols()) + ", expected " + std::to_string(m) +
              ")");
  Mat<T> w = phi.basis * ker;  // 2N x m
  Mat<T> red(2 * m, m);
  red.set_block(0, 0, w.block(0, 0, m, m));      // x-part
  red.set_block(m, 0, w.block(N, 0, m, m));      // y-part
  require(detail::full_column_rank(red), "NotTransverse",
          "reduction degenerate");
  return Lagr<T>{m, 0, red};
}

template <class T>
void check_lift(const StableLift<T>& l) {
  require(l.form.dim() == l.m + l.n, "SchemaError",
          "stable lift: form dimension mismatch");
  Mat<T> lower = l.form.mat.block(l.m, 0, l.n, l.m + l.n);
  require(l.n == 0 || detail::full_column_rank(lower.transpose()),
          "NotTransverse",
          "lift's graph is not transverse to E x R^n (lower block rank "
          "deficient)");
}

template <class T>
Lagr<T> lift_lagrangian(const StableLift<T>& l) {
  Lagr<T> g = graph_of_form(l.form);
  g.m = l.m;
  g.n = l.n;
  return g;
}

template <class T>
StableLift<T> left_mul(const QForm<T>& q, const StableLift<T>& phi) {
  const int m = phi.m, n = phi.n, k = q.dim();
  Mat<T> f(m + k + n, m + k + n);
  auto src = [&](int i) { return i < m ? i : i + k; };  // old -> new index
  for (int i = 0; i < m + n; ++i)
    for (int j = 0; j < m + n; ++j) f(src(i), src(j)) = phi.form.mat(i, j);
  f.set_block(m, m, q.mat);
  return StableLift<T>{m, n + k, QForm<T>(f)};
}

template <class T>
StableLift<T> right_mul(const StableLift<T>& phi, const QForm<T>& q) {
  return StableLift<T>{phi.m, phi.n + q.dim(),
                       QForm<T>(block_diag(phi.form.mat, q.mat))};
}

template <class T>
Lagr<T> horizontal(int m) {
  Mat<T> b(2 * m, m);
  b.set_block(0, 0, Mat<T>::identity(m));
  return Lagr<T>{m, 0, b};
}

template <class T>
bool in_fiber_over_horizontal(const StableLift<T>& phi) {
  return equal_subspace(reduce(phi).basis, horizontal<T>(phi.m).basis);
}

template <class T>
StableLift<T> fiber_retract(const StableLift<T>& phi, const T& t) {
  require(in_fiber_over_horizontal(phi), "NotInFiber",
          "fiber_retract requires reduce(phi) = H");
  const int m = phi.m, n = phi.n;
  Mat<T> s(m + n, m + n);
  for (int i = 0; i < m; ++i) s(i, i) = t;
  for (int i = m; i < m + n; ++i) s(i, i) = T(1);
  StableLift<T> out{m, n, QForm<T>(s.transpose() * phi.form.mat * s)};
  check_lift(out);
  return out;
}

template <class T>
QForm<T> s_theta(const Mat<T>& theta) {
  require(theta.rows() == theta.cols() && theta.rows() % 2 == 0, "SchemaError",
          "s_theta: matrix must be 2m x 2m");
  const int m = theta.rows() / 2;
  Mat<T> thi;
  try {
    thi = inverse(theta);
  } catch (const Error&) {
    raise("NotGraphical", "theta is singular");
  }
  Mat<T> beta = thi.block(0, m, m, m);
  Mat<T> gamma = thi.block(m, 0, m, m);
  Mat<T> delta = thi.block(m, m, m, m);
  Mat<T> dinv;
  try {
    dinv = inverse(delta);
  } catch (const Error&) {
    raise("NotGraphical",
          "graph of theta^{-1} not graphical over the (x1,x2) base");
  }
  Mat<T> a = (dinv * gamma) * (T(-1) / T(2));
  Mat<T> b = dinv * (T(1) / T(2));
  Mat<T> c = (beta * dinv) * (T(1) / T(2));
  Mat<T> M(2 * m, 2 * m);
  M.set_block(0, 0, a);
  M.set_block(0, m, b);
  M.set_block(m, 0, b.transpose());
  M.set_block(m, m, c);
  Mat<T> Msym = (M + M.transpose()) * (T(1) / T(2));
  // verify the defining identity as matrices
  Mat<T> a11 = Msym.block(0, 0, m, m), a12 = Msym.block(0, m, m, m);
  Mat<T> a21 = Msym.block(m, 0, m, m), a22 = Msym.block(m, m, m, m);
  Mat<T> lhs_in(2 * m, 2 * m), rhs(2 * m, 2 * m);
  lhs_in.set_block(0, 0, Mat<T>::identity(m));
  lhs_in.set_block(m, 0, a11 * T(2));
  lhs_in.set_block(m, m, a12 * T(2));
  rhs.set_block(0, 0, a21 * T(2));
  rhs.set_block(0, m, a22 * T(2));
  rhs.set_block(m, m, Mat<T>::identity(m));
  require(detail::matrices_close(thi * lhs_in, rhs, 1e-10), "NotGraphical",
          "defining identity for S^theta failed; theta not symplectic or too "
          "far from the identity");
  return QForm<T>(Msym);
}

template <class T>
StableLift<T> lift_step(const StableLift<T>& phi, const Mat<T>& theta) {
  const int m = phi.m, n = phi.n;
  require(theta.rows() == 2 * m && theta.cols() == 2 * m, "SchemaError",
          "lift_step: theta must act on E = C^m");
  QForm<T> S = s_theta(theta);
  const Mat<T>& A = phi.form.mat;
  Mat<T> A11 = A.block(0, 0, m, m), A12 = A.block(0, m, m, n),
         A22 = A.block(m, m, n, n);

  const int D = 3 * m + n;
  // M' in coordinates (X1, X2, X3, v)
  Mat<T> Mp(D, D);
  Mp.set_block(0, 0, S.mat.block(0, 0, m, m));
  Mp.set_block(0, m, S.mat.block(0, m, m, m));
  Mp.set_block(m, 0, S.mat.block(m, 0, m, m));
  Mp.set_block(m, m, S.mat.block(m, m, m, m));
  Mp.set_block(2 * m, 2 * m, A11);
  Mp.set_block(2 * m, 3 * m, A12);
  Mp.set_block(3 * m, 2 * m, A12.transpose());
  Mp.set_block(3 * m, 3 * m, A22);
  // - <X3, X2>
  for (int i = 0; i < m; ++i) {
    Mp(m + i, 2 * m + i) += T(-1) / T(2);
    Mp(2 * m + i, m + i) += T(-1) / T(2);
  }
  // substitution (x1,x2,x3,v) -> (X1,X2,X3,v)
  Mat<T> L(D, D);
  L.set_block(0, 0, Mat<T>::identity(m));                // X1 = x1
  L.set_block(m, 0, A11 * T(2));                         // X2 = 2 A11 x1
  L.set_block(m, m, Mat<T>::identity(m));                //      + x2
  L.set_block(m, 2 * m, -A11);                           //      - A11 x3
  L.set_block(m, 3 * m, A12 * T(2));                     //      + 2 A12 v
  L.set_block(2 * m, 0, Mat<T>::identity(m));            // X3 = x1 - x3
  L.set_block(2 * m, 2 * m, -Mat<T>::identity(m));
  L.set_block(3 * m, 3 * m, Mat<T>::identity(n));        // v = v
  Mat<T> F = L.transpose() * Mp * L;

  // reorder to (x1, x2_1, x3_1, x2_2, x3_2, ..., v): the new coordinates
  // interleave so that lift_step(phi, id) = h^m . phi on the nose
  std::vector<int> src(D);
  for (int i = 0; i < m; ++i) src[i] = i;
  for (int i = 0; i < m; ++i) {
    src[m + 2 * i] = m + i;      // x2_i
    src[m + 2 * i + 1] = 2 * m + i;  // x3_i
  }
  for (int j = 0; j < n; ++j) src[3 * m + j] = 3 * m + j;
  Mat<T> Fp(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) Fp(i, j) = F(src[i], src[j]);

  StableLift<T> out{m, n + 2 * m, QForm<T>(Fp)};
  check_lift(out);
  return out;
}

template <class T>
Mat<T> p_action_matrix(const PElement<T>& p, int m) {
  const int M = p.b.rows();
  require(p.a.rows() == M && p.a.cols() == m && p.b.cols() == M, "SchemaError",
          "p_action: block shapes inconsistent");
  Mat<T> binv;
  try {
    binv = inverse(p.b);
  } catch (const Error&) {
    raise("SingularB", "the GL factor of the P-element is singular");
  }
  const int N = m + M;
  Mat<T> ab(N, N);  // [[I, 0], [a, b]]
  ab.set_block(0, 0, Mat<T>::identity(m));
  ab.set_block(m, 0, p.a);
  ab.set_block(m, m, p.b);
  // inverse transpose: [[I, -a^T b^{-T}], [0, b^{-T}]]
  Mat<T> abt(N, N);
  abt.set_block(0, 0, Mat<T>::identity(m));
  abt.set_block(0, m, -(p.a.transpose() * binv.transpose()));
  abt.set_block(m, m, binv.transpose());
  return block_diag(ab, abt);
}

template <class T>
Lagr<T> p_action(const PElement<T>& p, const Lagr<T>& phi) {
  Mat<T> act = p_action_matrix(p, phi.half_dim() - p.b.rows());
  require(act.rows() == 2 * phi.half_dim(), "SchemaError",
          "p_action: dimension mismatch");
  return Lagr<T>{phi.m, phi.n, act * phi.basis};
}

template <class T>
Mat<T> u_phi(const StableLift<T>& phi) {
  check_lift(phi);
  const int m = phi.m, n = phi.n, N = m + n;
  Mat<T> lower = phi.form.mat.block(m, 0, n, N);
  Mat<T> ker = kernel(lower);  // N x m, X-parametrization of phi cap (ExR^n)
  require(ker.cols() == m, "NotTransverse", "lift not transverse to E x R^n");
  Mat<T> kx = ker.block(0, 0, m, m);
  Mat<T> kxi;
  try {
    kxi = inverse(kx);
  } catch (const Error&) {
    raise("RankDeficient",
          "reduced subspace not transverse to V; no x-parametrization");
  }
  return ker * kxi;  // x-block normalized to the identity
}

template <class T>
CompatResult<T> compatibility_normalize(const std::vector<StableLift<T>>& phis,
                                        const Mat<T>& pi_block,
                                        const Mat<T>& v_block) {
  const int m = pi_block.rows();
  const int k = v_block.rows();
  require(pi_block.cols() == m && v_block.cols() == m, "SchemaError",
          "compatibility data shapes inconsistent");
  Mat<T> pii;
  try {
    pii = inverse(pi_block);
  } catch (const Error&) {
    raise("RankDeficient", "embedding differential has singular base block");
  }
  CompatResult<T> out;
  for (const StableLift<T>& phi : phis) {
    require(phi.m == m && phi.n >= k, "SchemaError",
            "lift incompatible with embedding data");
    const int stab = phi.n, N = m + stab;
    Mat<T> u = u_phi(phi) * pi_block;  // (m+stab) x m, x-block = Pi
    require(u.block(m, 0, k, m).is_zero(), "SchemaError",
            "lift not stabilized over the embedding block (its u has a "
            "nonzero component there)");
    Mat<T> dpsi(N, m);
    dpsi.set_block(0, 0, pi_block);
    dpsi.set_block(m, 0, v_block);
    // projections onto the images, composed with the inverse parametrization
    Mat<T> p_u = solve(u.transpose() * u, u.transpose());
    Mat<T> p_psi = solve(dpsi.transpose() * dpsi, dpsi.transpose());
    Mat<T> ins_v(N, m);
    ins_v.set_block(m, 0, v_block);
    Mat<T> ins_w(N, m);
    ins_w.set_block(m + k, 0, u.block(m + k, 0, stab - k, m));
    Mat<T> B = Mat<T>::identity(N) + ins_v * p_u;
    Mat<T> C = Mat<T>::identity(N) + ins_w * p_psi;
    Mat<T> A = inverse(C) * B;
    require(detail::matrices_close(A * u, dpsi, 1e-10), "RankDeficient",
            "normalization failed to align the monomorphism");
    // conjugate the graph form: F' = A^{-T} F A^{-1}
    Mat<T> ainv = inverse(A);
    StableLift<T> moved{m, stab,
                        QForm<T>(ainv.transpose() * phi.form.mat * ainv)};
    check_lift(moved);
    out.lifts.push_back(std::move(moved));
    out.block_actions.push_back(std::move(A));
  }
  return out;
}

}  // namespace gfc
