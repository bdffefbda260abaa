#pragma once

#include <optional>

#include "gfc/expr.hpp"

namespace gfc {

// Base region: a point, an interval chart, or a circle chart with parameter
// in [0, 1).
struct BaseDesc {
  enum class Kind { point, interval, circle };
  Kind kind = Kind::point;
  double lo = 0, hi = 1;

  std::vector<double> samples(int k) const;
};

// f(x, w, v) = w + g(x, v) + epsilon(x, w, v), epsilon supported in the
// declared (w, v)-box over the whole base.
struct LinFn {
  BaseDesc base;
  int n = 0;  // fiber dimension (v variables)
  Expr g;        // in (x, v)
  Expr epsilon;  // in (x, w, v)
  double w_lo = -2, w_hi = 2;
  std::vector<std::pair<double, double>> v_box;  // one range per v_i
  Expr bound;                    // b(x) >= 0
  bool b_declared_bound = false;  // caller claims max |eps| <= b (checked
                                  // with a 1.05 sampling safety factor)
  double feature_scale = 1.0;

  double eval(double x, double w, const std::vector<double>& v) const;
  double eval_eps(double x, double w, const std::vector<double>& v) const;
  double eval_b(double x) const;
  // jet in the fiber variables (w, v_1..v_n)
  Jet2 fiber_jet(double x, double w, const std::vector<double>& v) const;
  // jet in (x, w, v): for Legendrian data
  Jet2 full_jet(double x, double w, const std::vector<double>& v) const;

  std::vector<double> pack(double x, double w, const std::vector<double>& v) const;
  std::vector<int> fiber_slots() const;
};

// invariant checks: epsilon vanishes on the support-box shell (1e-12) and,
// when declared, the bound holds on a sample grid with safety factor 1.05
void check_linfn(const LinFn& f);

// recover g by evaluating past the support box: f(x, W, v) - W for large W
double recover_g(const LinFn& f, double x, const std::vector<double>& v);

// the modified stabilization (f (+)_b q)(x,w,v,u) =
//   w + g + q(u) + chi_q(u/b) eps; b defaults to the function's own bound
LinFn oplus_b(const LinFn& f, const QuadForm& q);
LinFn oplus_b(const LinFn& f, const QuadForm& q, const Expr& b,
              bool b_is_declared_bound);

// plain stabilization f (+) q (no cut-off; not linear at infinity, used by
// the critical-set comparison oracles)
LinFn oplus_plain(const LinFn& f, const QuadForm& q);

// permute the fiber coordinates: new v_i = old v_{perm[i]}
LinFn permute_fiber(const LinFn& f, const std::vector<int>& perm);

}  // namespace gfc
