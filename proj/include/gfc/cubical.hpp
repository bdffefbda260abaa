#pragma once

#include <functional>

#include "gfc/homalg.hpp"

namespace gfc {

// Rectangular grid of scalar samples over a box in R^d. The grid is a full
// cubical complex (vertices, edges, squares, ...) with the lower-star rule:
// a cell's value is the max over its vertices, so sublevel sets are closed
// subcomplexes.
struct CubicalField {
  std::vector<int> npoints;    // vertices per axis, each >= 2
  std::vector<double> lo, hi;  // box per axis
  std::vector<double> values;  // vertex samples, last axis fastest
  double grid_tolerance = 1e-9;
  bool boundary_certified = false;  // caller guarantees the linear model
                                    // holds within 1e-9 near the boundary

  int dims() const { return static_cast<int>(npoints.size()); }
  size_t vertex_count() const;
  double spacing(int axis) const {
    return (hi[axis] - lo[axis]) / (npoints[axis] - 1);
  }
  void check() const;

  static CubicalField sample(std::vector<int> npoints, std::vector<double> lo,
                             std::vector<double> hi,
                             const std::function<double(const std::vector<double>&)>& f);
};

// The reduced core of the relative complex of ({f <= b}, {f <= a}): what
// remains after coreduction and free-face collapse, with its boundary
// columns. Computing it once lets Z and mod-p answers share the heavy pass.
struct CubicalCore {
  std::vector<int> ranks;  // cells per degree
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cols;
};

// Raises ThresholdTooClose if a sample sits within grid_tolerance of a
// threshold, BoxNotCertified if the field is not certified.
CubicalCore cubical_reduce(const CubicalField& field, double b, double a);

GradedAbGroup homology_of_core(const CubicalCore& core);
std::map<int, int> core_dims_mod_p(const CubicalCore& core, long p);

// One-shot conveniences over the same pipeline.
GradedAbGroup cubical_sublevel_homology(const CubicalField& field, double b,
                                        double a);
std::map<int, int> cubical_sublevel_dims_mod_p(const CubicalField& field,
                                               double b, double a, long p);

}  // namespace gfc
