#include "gfc/genfun.hpp"

#include <cmath>

namespace gfc {

namespace {

// min over the transition region 0 < alpha < 1 of
//   |dg/dv| - (1/4 + t) * 4 r(t) * |dalpha/dv|
// sampled on a grid; positive means the doubled function's critical set is
// exactly Sigma_g x {+-r(t)}
double admissibility_margin(const PlainFn& g, const Expr& alpha,
                            const std::vector<std::pair<double, double>>& box,
                            double t, double x) {
  const int n = g.n;
  std::vector<int> slots;
  for (int i = 0; i < n; ++i) slots.push_back(slot_v(i));
  double margin = std::numeric_limits<double>::infinity();
  const int kGrid = 24;
  std::vector<int> idx(n, 0);
  for (;;) {
    std::vector<double> vals(2 + n, 0.0);
    vals[kSlotX] = x;
    for (int i = 0; i < n; ++i)
      vals[slot_v(i)] = box[i].first +
                        (box[i].second - box[i].first) * idx[i] / kGrid;
    double a = alpha.eval(vals);
    if (a > 1e-6 && a < 1 - 1e-6) {
      Jet2 jg = g.g.jet(vals, slots);
      Jet2 ja = alpha.jet(vals, slots);
      double ng = 0, na = 0;
      for (int i = 0; i < n; ++i) {
        ng += jg.g[i] * jg.g[i];
        na += ja.g[i] * ja.g[i];
      }
      double lhs = std::sqrt(ng);
      double rhs = (0.25 + t) * 4 * r_of_t(t) * std::sqrt(na);
      margin = std::min(margin, lhs - rhs);
    }
    int a2 = n - 1;
    while (a2 >= 0 && ++idx[a2] > kGrid) idx[a2--] = 0;
    if (a2 < 0) break;
  }
  return margin;
}

}  // namespace

DoubleResult double_fn(const PlainFn& g, const Expr& alpha,
                       const std::vector<std::pair<double, double>>& alpha_box,
                       const Rat& t) {
  require(t > 0 && t < Rat(3, 4), "SchemaError",
          "doubling parameter must lie in (0, 3/4)");
  require(static_cast<int>(alpha_box.size()) == g.n, "SchemaError",
          "alpha support box must match the fiber dimension");
  const double td = to_double(t);

  auto xs = g.base.samples(5);
  for (double x : xs) {
    // alpha = 1 at every point of Sigma_g; cut-off support meets Sigma_{g'}
    // only there (g' = g globally at desk scale, so this is all of Sigma_g)
    auto sigma = critical_points_plain(g.g, g.n, x, g.crit_box, g.feature_scale);
    require(!sigma.empty() || g.n == 0, "SchemaError",
            "no fiber-critical points found; nothing to double");
    for (const CritPoint& c : sigma) {
      std::vector<double> vals(2 + g.n, 0.0);
      vals[kSlotX] = x;
      for (int i = 0; i < g.n; ++i) vals[slot_v(i)] = c.v[i];
      require(std::abs(alpha.eval(vals) - 1.0) <= 1e-9, "SchemaError",
              "alpha must be identically 1 near the critical set");
    }
    double margin = admissibility_margin(g, alpha, alpha_box, td, x);
    require(margin > 0, "TTooLarge",
            "admissibility inequality fails on the transition region "
            "(margin " + std::to_string(margin) + "); reduce t",
            "lemma:compact-generation");
  }

  DoubleResult out;
  out.t = td;
  out.r = r_of_t(td);
  out.s = s_of_t(td);
  // largest admissible t on this instance, by bisection on the margin
  {
    double lo = td, hi = 0.75;
    for (int it = 0; it < 40; ++it) {
      double mid = 0.5 * (lo + hi);
      double worst = std::numeric_limits<double>::infinity();
      for (double x : xs)
        worst = std::min(worst, admissibility_margin(g, alpha, alpha_box, mid, x));
      (worst > 0 ? lo : hi) = mid;
    }
    out.t_threshold = lo;
  }

  LinFn f;
  f.base = g.base;
  f.n = g.n;
  f.g = g.g;
  f.epsilon = Expr::constant(Rat(1, 4) + t) * alpha * Expr::dmw(Expr::w());
  f.w_lo = -2;
  f.w_hi = 2;
  f.v_box = alpha_box;
  // b > max |D - w| scaled by (1/4 + t); 3.05 covers the junction dip
  f.bound = Expr::constant((Rat(1, 4) + t) * Rat(305, 100));
  f.b_declared_bound = true;
  f.feature_scale = g.feature_scale;
  out.f = std::move(f);
  return out;
}

}  // namespace gfc
