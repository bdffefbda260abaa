#pragma once

#include "gfc/linfn.hpp"

namespace gfc {

struct CritPoint {
  double x = 0;
  double w = 0;
  std::vector<double> v;
  double value = 0;
  int index = 0, coindex = 0;  // fiber Hessian signature
  // Legendrian image (x, df/dx, f)
  double dfdx = 0;
};

// All fiber-critical points of f(x, .) inside the inflated support box,
// Newton-polished to gradient norm <= 1e-9, deduplicated at radius 1e-6,
// seeded on a grid of spacing feature_scale / 16. Raises DegenerateCritical
// on a near-singular fiber Hessian, TooManySeeds when the declared feature
// scale asks for an unreasonable grid.
std::vector<CritPoint> critical_points(const LinFn& f, double x);

// same machinery for a w-free generating function g(x, v)
std::vector<CritPoint> critical_points_plain(const Expr& g, int n, double x,
                                             const std::vector<std::pair<double, double>>& seed_box,
                                             double feature_scale);

// generic entry: Newton search for critical points of an arbitrary jet
// functional over a seed box; first_coord_is_w controls how results are
// packed into CritPoint
std::vector<CritPoint> newton_critical_search(
    const std::function<Jet2(const std::vector<double>&)>& jet,
    const std::vector<std::pair<double, double>>& seed_box, double spacing,
    double x, bool first_coord_is_w);

// multiset comparison of critical sets (location and value), tolerance per
// coordinate; used by the dual-run oracles
bool same_critical_sets(const std::vector<CritPoint>& a,
                        const std::vector<CritPoint>& b, double tol);

}  // namespace gfc
