#pragma once

#include <map>

#include "gfc/cellcx.hpp"
#include "gfc/quadform.hpp"

namespace gfc {

// Directed open cover: finitely many open regions with a partial order such
// that the indices containing any cell are totally ordered.
struct DirectedCover {
  CellComplex base;
  std::vector<std::vector<char>> regions;       // per index, cell membership
  std::vector<std::vector<char>> strictly_less;  // partial order, strict

  int count() const { return static_cast<int>(regions.size()); }
  bool less(int i, int j) const { return strictly_less[i][j]; }
  void set_total_order();
  void check() const;  // covering, non-emptiness, directedness

  std::vector<char> overlap(int i, int j) const {
    return intersect(regions[i], regions[j]);
  }
};

// Q-valued 1-cocycle on a directed cover: for each comparable pair with
// non-empty overlap, one form of dimension n_j - n_i per overlap component.
struct QCocycle {
  DirectedCover cover;
  std::vector<int> dims;
  std::map<std::pair<int, int>, std::vector<QuadForm>> q;

  const QuadForm& q_at(int i, int j, int cell) const;  // component lookup
  void check_shapes() const;
};

struct VerifyReport {
  struct Violation {
    int i, j, k;
    int cell;  // a cell of the offending triple component
  };
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
};

// the cocycle law q_ij + q_jk = q_ik on every triple component
VerifyReport verify(const QCocycle& c);

// pull back along a refinement (finer cover on the same base complex,
// sigma mapping new indices to old); NotARefinement on violations
QCocycle refine(const QCocycle& c, const DirectedCover& finer,
                const std::vector<int>& sigma);

// reindex to the total order sorted by (dims, original index); raises
// OrderObstruction if overlapping regions have strictly decreasing dims
struct WellOrdered {
  QCocycle cocycle;
  std::vector<int> old_index;  // per new position, the original index
};
WellOrdered well_order(const QCocycle& c);

// star cover of the barycentric subdivision with r(j) = max { i : st(j)
// inside U_i }, ordered by (cell dimension, id); TooCoarse when some star
// fits in no region
struct TotalOrderRefinement {
  QCocycle cocycle;        // over the subdivided base
  Subdivision subdivision;
  std::vector<int> to_old;  // refinement map r
};
TotalOrderRefinement total_order_refinement(const QCocycle& c);

// per (i, j) per overlap component, samples of a homotopy from q_ij to the
// hyperbolic form, all at shared rational times
struct CocycleHomotopy {
  std::vector<Rat> ts;  // must start at 0 and end at 1
  std::map<std::pair<int, int>, std::vector<std::vector<QuadForm>>> samples;
};

// the rational-arc interpolation from each q_ij to h^{(n_j-n_i)/2}
CocycleHomotopy make_interpolated_homotopy(const QCocycle& c,
                                           const std::vector<Rat>& ts);

// Solves q_ij + Q_j = Q_i by downward induction over a well-ordered
// cocycle; the result assigns a form to every cell of every region.
// OddGap when some n_j - n_i is odd; HomotopyNotCocycle when the supplied
// homotopy fails the cocycle law at a sample time.
struct UntwistResult {
  // per index, per cell (base-complex indexed; empty form where absent)
  std::vector<std::map<int, QuadForm>> q_i;
};
UntwistResult untwist(const QCocycle& c, const CocycleHomotopy& homotopy);

// Cech pairing of the signature cocycle against an edge loop of the base
// (consecutive edges sharing a vertex); integer-valued, refinement
// invariant
int maslov_pairing(const QCocycle& c, const std::vector<int>& edge_loop);

// pairings against an automatically chosen cycle basis of the cover's
// component-level nerve
std::vector<std::pair<std::vector<int>, int>> maslov_class(const QCocycle& c);

}  // namespace gfc
