#pragma once

#include "gfc/critical.hpp"
#include "gfc/doubling.hpp"

namespace gfc {

// A plain generating function g(x, v) over a base (no w, no epsilon).
struct PlainFn {
  BaseDesc base;
  int n = 0;
  Expr g;
  std::vector<std::pair<double, double>> crit_box;  // where to hunt Sigma_g
  double feature_scale = 1.0;
};

struct DoubleResult {
  LinFn f;                 // f^t = w + g + (1/4+t) alpha (D(w) - w)
  double t = 0;
  double r = 0, s = 0;     // critical locations +-r, values g -+ s
  double t_threshold = 0;  // largest verified-admissible t on this instance
};

// The doubling construction. alpha must be 1 near Sigma_g (sampled at the
// critical points), supported in alpha_box, and its transition region must
// pass the admissibility inequality at the given t (TTooLarge otherwise).
DoubleResult double_fn(const PlainFn& g, const Expr& alpha,
                       const std::vector<std::pair<double, double>>& alpha_box,
                       const Rat& t);

}  // namespace gfc
