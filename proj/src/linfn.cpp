#include "gfc/linfn.hpp"

#include <cmath>

namespace gfc {

std::vector<double> BaseDesc::samples(int k) const {
  switch (kind) {
    case Kind::point:
      return {0.0};
    case Kind::interval: {
      std::vector<double> s;
      for (int i = 0; i < k; ++i)
        s.push_back(lo + (hi - lo) * (i + 0.5) / k);
      return s;
    }
    case Kind::circle: {
      std::vector<double> s;
      for (int i = 0; i < k; ++i) s.push_back(static_cast<double>(i) / k);
      return s;
    }
  }
  return {};
}

std::vector<double> LinFn::pack(double x, double w,
                                const std::vector<double>& v) const {
  std::vector<double> vals(2 + n, 0.0);
  vals[kSlotX] = x;
  vals[kSlotW] = w;
  for (int i = 0; i < n; ++i) vals[slot_v(i)] = v[i];
  return vals;
}

std::vector<int> LinFn::fiber_slots() const {
  std::vector<int> s{kSlotW};
  for (int i = 0; i < n; ++i) s.push_back(slot_v(i));
  return s;
}

double LinFn::eval(double x, double w, const std::vector<double>& v) const {
  auto vals = pack(x, w, v);
  return w + g.eval(vals) + epsilon.eval(vals);
}

double LinFn::eval_eps(double x, double w, const std::vector<double>& v) const {
  return epsilon.eval(pack(x, w, v));
}

double LinFn::eval_b(double x) const {
  std::vector<double> vals(2 + n, 0.0);
  vals[kSlotX] = x;
  return bound.eval(vals);
}

Jet2 LinFn::fiber_jet(double x, double w, const std::vector<double>& v) const {
  auto vals = pack(x, w, v);
  auto slots = fiber_slots();
  Jet2 j = g.jet(vals, slots);
  Jet2 e = epsilon.jet(vals, slots);
  j.v += w + e.v;
  j.g[0] += 1.0;
  for (int i = 0; i < j.n(); ++i) j.g[i] += e.g[i];
  for (int i = 0; i < j.n() * j.n(); ++i) j.h[i] += e.h[i];
  return j;
}

Jet2 LinFn::full_jet(double x, double w, const std::vector<double>& v) const {
  auto vals = pack(x, w, v);
  std::vector<int> slots{kSlotX, kSlotW};
  for (int i = 0; i < n; ++i) slots.push_back(slot_v(i));
  Jet2 j = g.jet(vals, slots);
  Jet2 e = epsilon.jet(vals, slots);
  j.v += w + e.v;
  j.g[1] += 1.0;
  for (int i = 0; i < j.n(); ++i) j.g[i] += e.g[i];
  for (int i = 0; i < j.n() * j.n(); ++i) j.h[i] += e.h[i];
  return j;
}

void check_linfn(const LinFn& f) {
  require(static_cast<int>(f.v_box.size()) == f.n, "SchemaError",
          "support box must list one range per fiber variable");
  require(f.w_hi > f.w_lo, "SchemaError", "empty w support range");
  auto xs = f.base.samples(7);
  // shell sampling: epsilon must vanish on the boundary of its box
  const int kShell = 5;
  for (double x : xs) {
    require(f.eval_b(x) >= 0, "SchemaError", "bound function is negative");
    for (int axis = -1; axis < f.n; ++axis) {
      for (int side = 0; side < 2; ++side) {
        for (int s = 0; s < kShell * std::max(1, f.n); ++s) {
          double w = f.w_lo + (f.w_hi - f.w_lo) * ((s * 13) % 17) / 16.0;
          std::vector<double> v(f.n);
          for (int i = 0; i < f.n; ++i)
            v[i] = f.v_box[i].first +
                   (f.v_box[i].second - f.v_box[i].first) * ((s * 7 + i) % 11) / 10.0;
          if (axis < 0)
            w = side ? f.w_hi : f.w_lo;
          else
            v[axis] = side ? f.v_box[axis].second : f.v_box[axis].first;
          require(std::abs(f.eval_eps(x, w, v)) <= 1e-12, "SchemaError",
                  "epsilon does not vanish on its declared support shell");
        }
      }
    }
  }
  if (f.b_declared_bound) {
    for (double x : xs) {
      double b = f.eval_b(x);
      double worst = 0;
      const int kGrid = 9;
      std::vector<int> idx(f.n, 0);
      for (int wi = 0; wi <= kGrid; ++wi) {
        double w = f.w_lo + (f.w_hi - f.w_lo) * wi / kGrid;
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
          std::vector<double> v(f.n);
          for (int i = 0; i < f.n; ++i)
            v[i] = f.v_box[i].first +
                   (f.v_box[i].second - f.v_box[i].first) * idx[i] / kGrid;
          worst = std::max(worst, std::abs(f.eval_eps(x, w, v)));
          int a = f.n - 1;
          while (a >= 0 && ++idx[a] > kGrid) idx[a--] = 0;
          if (a < 0) break;
        }
      }
      require(worst <= 1.05 * b, "SchemaError",
              "declared bound does not dominate |epsilon| (sampled max " +
                  std::to_string(worst) + " vs b = " + std::to_string(b) + ")",
              "lemma:bound.declared");
    }
  }
}

double recover_g(const LinFn& f, double x, const std::vector<double>& v) {
  double wbig = f.w_hi + 1 + std::abs(f.w_hi - f.w_lo);
  return f.eval(x, wbig, v) - wbig;
}

LinFn oplus_b(const LinFn& f, const QuadForm& q) {
  return oplus_b(f, q, f.bound, f.b_declared_bound);
}

LinFn oplus_b(const LinFn& f, const QuadForm& q, const Expr& b,
              bool b_is_declared_bound) {
  const int k = q.dim();
  if (k == 0) return f;  // unit form
  LinFn out;
  out.base = f.base;
  out.n = f.n + k;
  std::vector<int> u_slots;
  for (int i = 0; i < k; ++i) u_slots.push_back(slot_v(f.n + i));
  out.g = f.g + Expr::form(q, u_slots);
  out.epsilon = Expr::chi(q, b, u_slots) * f.epsilon;
  out.w_lo = f.w_lo;
  out.w_hi = f.w_hi;
  out.v_box = f.v_box;
  // support in the new coordinates from the cut-off's own support
  LinFn probe = f;
  probe.bound = b;
  double bmax = 0;
  for (double x : f.base.samples(9)) bmax = std::max(bmax, probe.eval_b(x));
  auto ubox = cutoff_support_box(q, CutoffProfile{}, bmax);
  for (int i = 0; i < k; ++i) out.v_box.push_back({-ubox[i], ubox[i]});
  out.bound = b;
  out.b_declared_bound = b_is_declared_bound;
  out.feature_scale = f.feature_scale;
  return out;
}

LinFn oplus_plain(const LinFn& f, const QuadForm& q) {
  const int k = q.dim();
  LinFn out = f;
  out.n = f.n + k;
  std::vector<int> u_slots;
  for (int i = 0; i < k; ++i) u_slots.push_back(slot_v(f.n + i));
  out.g = f.g + Expr::form(q, u_slots);
  // epsilon unchanged: supported in the old box times all of R^k; the
  // critical-set oracles only use this near u = 0
  for (int i = 0; i < k; ++i) out.v_box.push_back({-1.0, 1.0});
  return out;
}

LinFn permute_fiber(const LinFn& f, const std::vector<int>& perm) {
  require(static_cast<int>(perm.size()) == f.n, "SchemaError",
          "fiber permutation size mismatch");
  // new v_i reads old v_{perm[i]}: remap old slot(perm[i]) -> slot(i)
  std::vector<int> slot_map(2 + f.n);
  slot_map[kSlotX] = kSlotX;
  slot_map[kSlotW] = kSlotW;
  for (int i = 0; i < f.n; ++i) slot_map[slot_v(perm[i])] = slot_v(i);
  LinFn out = f;
  out.g = f.g.reindex(slot_map);
  out.epsilon = f.epsilon.reindex(slot_map);
  out.bound = f.bound.reindex(slot_map);
  out.v_box.resize(f.n);
  for (int i = 0; i < f.n; ++i) out.v_box[i] = f.v_box[perm[i]];
  return out;
}

}  // namespace gfc
