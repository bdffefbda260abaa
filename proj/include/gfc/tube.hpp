#pragma once

#include <optional>

#include "gfc/critical.hpp"
#include "gfc/cubical.hpp"

namespace gfc {

// Sample f(x, . , .) on a box adapted to its critical values: floor below
// the -infinity proxy threshold, walls outside the epsilon support. The
// field is certified by sampling epsilon near the boundary.
CubicalField build_sublevel_field(const LinFn& f, double x, double w_floor,
                                  double w_ceil, int grid_points = 0);

struct TubeResult {
  std::optional<int> degree;  // i with H = Z[i], if concentrated
  GradedAbGroup homology;     // H(f <= 0, f <= -T)
  double threshold = 0;       // the -infinity proxy T
  std::map<int, int> dims_f2, dims_f3;
  bool crosschecks_ok = false;
};

// H_*(f(x,.) <= 0, <= -infinity) via the cubical oracle; returns the degree
// when the result is Z concentrated in one degree. ZeroNotRegular when a
// critical value sits within 1e-6 of zero.
TubeResult tube_check(const LinFn& f, double x, int grid_points = 0);

}  // namespace gfc
