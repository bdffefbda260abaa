#pragma once

#include "gfc/critical.hpp"
#include "gfc/qbundle.hpp"

namespace gfc {

// Twisted generating function linear at infinity over a charted base: one
// function per region, glued on overlaps by the cocycle through the
// modified stabilization with the shared bound.
struct TwistedGF {
  QCocycle cocycle;       // base must carry an interval/circle chart
  std::vector<LinFn> fs;  // per index; fiber dimension = cocycle.dims[i]
  Expr bound;

  void check(double tol = 1e-10) const;  // shapes + sampled gluing law
};

// change to another total order by adjacent transpositions, carrying the
// transition table and the stabilized functions along; the underlying
// Legendrian data is preserved (critical sets per region unchanged).
// ExtensionObstruction when a required constant extension does not exist.
TwistedGF reorder(const TwistedGF& t, const std::vector<int>& new_order);

struct AssembleReport {
  struct RegionData {
    int index;
    double x;
    std::vector<CritPoint> points;
  };
  std::vector<RegionData> tables;
  // matched pairs across overlaps at shared samples: (i, pt) ~ (j, pt)
  struct Match {
    int i, j;
    int cell;
    double x;
    size_t idx_i, idx_j;
  };
  std::vector<Match> matches;
  int orbit_count = 0;
};

// Per-region critical data, overlap identification (critical points of f_j
// over an overlap are those of f_i padded by zeros, matched to 1e-7), and
// the glued orbit count. GluingMismatch if identification fails.
AssembleReport assemble_sigma(const TwistedGF& t);

}  // namespace gfc
