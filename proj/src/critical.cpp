#include "gfc/critical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>

namespace gfc {

namespace {

struct NewtonProblem {
  // jet of the objective in the active variables at a point
  std::function<Jet2(const std::vector<double>&)> jet;
  int dim;
};

bool newton_polish(const NewtonProblem& p, std::vector<double>& pt,
                   double* grad_norm_out) {
  const int n = p.dim;
  for (int it = 0; it < 60; ++it) {
    Jet2 j = p.jet(pt);
    double gn = 0;
    for (int i = 0; i < j.n(); ++i) gn += j.g[i] * j.g[i];
    gn = std::sqrt(gn);
    if (!std::isfinite(gn)) return false;
    if (gn <= 1e-12) {
      *grad_norm_out = gn;
      return true;
    }
    DMat h(n, n), g(n, 1);
    for (int i = 0; i < n; ++i) {
      g(i, 0) = -j.g[i];
      for (int k = 0; k < n; ++k) h(i, k) = j.hess(i, k);
    }
    DMat step;
    try {
      step = solve(h, g);
    } catch (const Error&) {
      return false;  // singular Hessian away from convergence
    }
    double slen = step.max_abs();
    if (slen > 8.0) {  // keep genuinely wild steps bounded
      for (int i = 0; i < n; ++i) pt[i] += step(i, 0) * (8.0 / slen);
    } else {
      for (int i = 0; i < n; ++i) pt[i] += step(i, 0);
    }
    if (slen < 1e-14) break;
  }
  Jet2 j = p.jet(pt);
  double gn = 0;
  for (int i = 0; i < j.n(); ++i) gn += j.g[i] * j.g[i];
  *grad_norm_out = std::sqrt(gn);
  return *grad_norm_out <= 1e-9;
}

std::pair<int, int> hessian_signature(const Jet2& j) {
  const int n = j.n();
  if (n == 0) return {0, 0};
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) h(i, k) = j.hess(i, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  int neg = 0, pos = 0;
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    double ev = es.eigenvalues()(i);
    require(std::abs(ev) >= 1e-8 * scale, "DegenerateCritical",
            "fiber Hessian nearly singular at a critical point");
    (ev < 0 ? neg : pos)++;
  }
  return {neg, pos};
}

}  // namespace

std::vector<CritPoint> newton_critical_search(
    const std::function<Jet2(const std::vector<double>&)>& jet,
    const std::vector<std::pair<double, double>>& seed_box, double spacing,
    double x, bool first_coord_is_w) {
  const int n = static_cast<int>(seed_box.size());
  std::vector<int> counts(n);
  double total = 1;
  for (int i = 0; i < n; ++i) {
    double len = seed_box[i].second - seed_box[i].first;
    counts[i] = std::max(2, static_cast<int>(std::ceil(len / spacing)) + 1);
    total *= counts[i];
  }
  if (total > 3e6) {
    std::string boxdesc;
    for (auto [lo2, hi2] : seed_box)
      boxdesc += " [" + std::to_string(lo2) + "," + std::to_string(hi2) + "]";
    raise("TooManySeeds",
          "seed grid would have " + std::to_string(static_cast<long long>(total)) +
              " points (spacing " + std::to_string(spacing) + ", box" + boxdesc +
              "); increase feature_scale or shrink the support box");
  }

  NewtonProblem prob{jet, n};
  std::vector<CritPoint> found;
  std::vector<int> idx(n, 0);
  for (;;) {
    std::vector<double> pt(n);
    for (int i = 0; i < n; ++i)
      pt[i] = seed_box[i].first + (seed_box[i].second - seed_box[i].first) *
                                      idx[i] / (counts[i] - 1);
    double gn = 0;
    if (newton_polish(prob, pt, &gn)) {
      bool in_box = true;
      for (int i = 0; i < n; ++i)
        in_box &= pt[i] >= seed_box[i].first - 0.5 &&
                  pt[i] <= seed_box[i].second + 0.5;
      if (in_box) {
        bool dup = false;
        for (const CritPoint& c : found) {
          double d2 = 0;
          int off = first_coord_is_w ? 1 : 0;
          if (first_coord_is_w) d2 += (c.w - pt[0]) * (c.w - pt[0]);
          for (int i = off; i < n; ++i) {
            double dv = c.v[i - off] - pt[i];
            d2 += dv * dv;
          }
          if (d2 < 1e-12) {
            dup = true;
            break;
          }
        }
        if (!dup) {
          CritPoint c;
          c.x = x;
          if (first_coord_is_w) {
            c.w = pt[0];
            c.v.assign(pt.begin() + 1, pt.end());
          } else {
            c.w = 0;
            c.v = pt;
          }
          Jet2 j = jet(pt);
          c.value = j.v;
          auto [neg, pos] = hessian_signature(j);
          c.index = neg;
          c.coindex = pos;
          found.push_back(std::move(c));
        }
      }
    }
    int a = n - 1;
    while (a >= 0 && ++idx[a] >= counts[a]) idx[a--] = 0;
    if (a < 0) break;
  }
  std::sort(found.begin(), found.end(), [](const CritPoint& a, const CritPoint& b) {
    if (a.w != b.w) return a.w < b.w;
    return a.v < b.v;
  });
  return found;
}



std::vector<CritPoint> critical_points(const LinFn& f, double x) {
  // critical points are confined to the epsilon support in w; the v-box is
  // inflated since g may place them slightly outside the declared support
  std::vector<std::pair<double, double>> box;
  box.push_back({f.w_lo - 0.25, f.w_hi + 0.25});
  for (auto [lo, hi] : f.v_box) {
    double pad = 0.1 * (hi - lo) + 0.25;
    box.push_back({lo - pad, hi + pad});
  }
  auto jet = [&f, x](const std::vector<double>& pt) {
    std::vector<double> v(pt.begin() + 1, pt.end());
    return f.fiber_jet(x, pt[0], v);
  };
  auto out = newton_critical_search(jet, box, f.feature_scale / 16.0, x, true);
  for (CritPoint& c : out) {
    Jet2 full = f.full_jet(x, c.w, c.v);
    c.dfdx = full.g[0];
  }
  return out;
}

std::vector<CritPoint> critical_points_plain(
    const Expr& g, int n, double x,
    const std::vector<std::pair<double, double>>& seed_box,
    double feature_scale) {
  std::vector<int> slots;
  for (int i = 0; i < n; ++i) slots.push_back(slot_v(i));
  auto jet = [&](const std::vector<double>& pt) {
    std::vector<double> vals(2 + n, 0.0);
    vals[kSlotX] = x;
    for (int i = 0; i < n; ++i) vals[slot_v(i)] = pt[i];
    return g.jet(vals, slots);
  };
  return newton_critical_search(jet, seed_box, feature_scale / 16.0, x, false);
}

bool same_critical_sets(const std::vector<CritPoint>& a,
                        const std::vector<CritPoint>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const CritPoint& ca : a) {
    bool matched = false;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const CritPoint& cb = b[j];
      if (std::abs(ca.w - cb.w) > tol) continue;
      if (std::abs(ca.value - cb.value) > tol) continue;
      size_t common = std::min(ca.v.size(), cb.v.size());
      bool ok = true;
      for (size_t i = 0; i < common; ++i)
        ok &= std::abs(ca.v[i] - cb.v[i]) <= tol;
      // extra coordinates of the longer point must vanish
      for (size_t i = common; i < ca.v.size(); ++i) ok &= std::abs(ca.v[i]) <= tol;
      for (size_t i = common; i < cb.v.size(); ++i) ok &= std::abs(cb.v[i]) <= tol;
      if (ok) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace gfc
