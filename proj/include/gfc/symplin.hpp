#pragma once

#include <vector>

#include "gfc/quadform.hpp"

namespace gfc {

// Global coordinates: ambient C^N with N = m + n, written (X, Y) with
// X = (x, u), Y = (y, eta); the base E = C^m holds (x, y), the
// stabilization C^n holds (u, eta). Under this layout
//   E x R^n      = { Y_j = 0 for j >= m }
//   V + i R^n    = { X = 0 }          (V = i R^m vertical in E)
//   H x R^n      = { Y = 0 }          (H = R^m horizontal complement)
// The symplectic form is w(v, w) = v^T Omega w with Omega = [[0, I], [-I, 0]].

template <class T>
Mat<T> omega_matrix(int half_dim) {
  Mat<T> o(2 * half_dim, 2 * half_dim);
  for (int i = 0; i < half_dim; ++i) {
    o(i, half_dim + i) = T(1);
    o(half_dim + i, i) = T(-1);
  }
  return o;
}

// Column-span representation of a Lagrangian subspace of E x C^n.
template <class T>
struct Lagr {
  int m = 0;  // half-dimension of E
  int n = 0;  // stabilization level
  Mat<T> basis;  // 2(m+n) x (m+n)

  int half_dim() const { return m + n; }
};

// Element of Lambda^V_n(C^m) represented as the quadratic form graphing it
// over H x R^n. The form itself may be degenerate (e.g. at the t=0 end of
// the fiber retraction); membership in Lambda_n is the full-rank condition
// on the lower block, checked by check_lift.
template <class T>
struct StableLift {
  int m = 0;
  int n = 0;
  QForm<T> form;  // dimension m + n

  int half_dim() const { return m + n; }
};

using LagrQ = Lagr<Rat>;
using LagrD = Lagr<double>;
using StableLiftQ = StableLift<Rat>;
using StableLiftD = StableLift<double>;

// Sampled path in Sp(2m): theta at parameters 0 = t_0 < ... < t_K = 1.
// The default factor radius admits a pi rotation sampled at K = 8 (factor
// norm 2 sin(pi/16) ~ 0.39) while still rejecting genuinely coarse paths;
// s_theta independently verifies its defining identity on every factor.
struct SymplPath {
  int m = 0;
  std::vector<DMat> samples;
  double near_identity_radius = 0.45;

  void check() const;  // identity start, symplectic samples, small factors
};

// ---- double-only numeric helpers (Eigen-backed) ----
double op_norm(const DMat& m);
double min_singular_value(const DMat& m);
double max_singular_value(const DMat& m);
// largest principal angle between the column spans
double principal_angle_max(const DMat& a, const DMat& b);

// ---- generic operations ----

template <class T>
bool is_isotropic(const Lagr<T>& l, double tol = 1e-10);
template <class T>
void check_lagrangian(const Lagr<T>& l);

// graph of the differential of q in R^k x iR^k (E = 0)
template <class T>
Lagr<T> graph_of_form(const QForm<T>& q);

template <class T>
bool is_transverse(const Lagr<T>& a, const Lagr<T>& b);

template <class T>
bool equal_subspace(const Mat<T>& a, const Mat<T>& b);

// symplectic reduction along E x R^n; raises NotTransverse
template <class T>
Lagr<T> reduce(const Lagr<T>& phi);

template <class T>
void check_lift(const StableLift<T>& l);  // lower block full rank

template <class T>
Lagr<T> lift_lagrangian(const StableLift<T>& l);

template <class T>
Lagr<T> reduce(const StableLift<T>& l) {
  return reduce(lift_lagrangian(l));
}

// left/right monoid actions on lifts: left inserts the form's coordinates
// before the existing stabilization, right appends after it
template <class T>
StableLift<T> left_mul(const QForm<T>& q, const StableLift<T>& phi);
template <class T>
StableLift<T> right_mul(const StableLift<T>& phi, const QForm<T>& q);

// the fixed horizontal complement H x R^n as a Lagrangian in E (n = 0)
template <class T>
Lagr<T> horizontal(int m);

template <class T>
bool in_fiber_over_horizontal(const StableLift<T>& phi);

// phi_t(h, v) = phi(t h, v); raises NotInFiber unless reduce(phi) = H
template <class T>
StableLift<T> fiber_retract(const StableLift<T>& phi, const T& t);

// unique S with theta^{-1}(x1 + i dS/dx1) = dS/dx2 + i x2; NotGraphical if
// the lower-right block of theta^{-1} is singular or the identity fails
template <class T>
QForm<T> s_theta(const Mat<T>& theta);

// one stabilization step of the path lifting: stab grows by 2m, the new
// coordinates sit interleaved right after the base block so that
// lift_step(phi, id) == left_mul(h^m, phi) exactly
template <class T>
StableLift<T> lift_step(const StableLift<T>& phi, const Mat<T>& theta);

std::vector<StableLiftD> lift_path(const StableLiftD& phi0,
                                   const SymplPath& path);

// Exact path lifting: samples are exact symplectic matrices (first one the
// identity). The composed lift's coefficients square at each factor, so long
// paths through steep positions are only meaningful in exact arithmetic.
std::vector<StableLiftQ> lift_path_exact(const StableLiftQ& phi0,
                                         const std::vector<RMat>& samples,
                                         double near_identity_radius = 0.45);

// element of P^M over E: base-preserving automorphism [[I_m, 0], [a, b]]
// of (E/V) x R^M
template <class T>
struct PElement {
  Mat<T> a;  // M x m
  Mat<T> b;  // M x M, invertible
};

// the symplectic lift of the P^M element to E x C^M, acting on (X, Y)
template <class T>
Mat<T> p_action_matrix(const PElement<T>& p, int m);

template <class T>
Lagr<T> p_action(const PElement<T>& p, const Lagr<T>& phi);

// monomorphism u_phi: G -> (E/V) x R^n, columns over the x-parametrization
// of G (requires G transverse to V); (m+n) x m matrix
template <class T>
Mat<T> u_phi(const StableLift<T>& phi);

template <class T>
struct CompatResult {
  std::vector<StableLift<T>> lifts;
  std::vector<Mat<T>> block_actions;  // (m+stab) x (m+stab) P-elements
};

// Normalizes each lift so that u_{phi'} = [Pi; v; 0]; v is k x m over the
// shared embedding block, each lift's own u must vanish on that block.
template <class T>
CompatResult<T> compatibility_normalize(const std::vector<StableLift<T>>& phis,
                                        const Mat<T>& pi_block,
                                        const Mat<T>& v_block);

// rotation path in Sp(2), embedded diagonally in Sp(2m), K factors
SymplPath make_rotation_path(int m, double angle, int K);

// path of K compositions of the rational rotation (12/13, 5/13); each factor
// turns by asin(5/13) ~ 0.3948, so K = 8 is a near-pi rotation, exactly
// symplectic at every sample
std::vector<RMat> make_rational_rotation_path(int m, int K);

}  // namespace gfc
