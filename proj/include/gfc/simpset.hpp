#pragma once

#include <optional>
#include <string>

#include "gfc/homalg.hpp"
#include "gfc/qbundle.hpp"

namespace gfc {

struct DiscreteMonoid {
  std::vector<std::string> names;
  std::vector<std::vector<int>> table;  // table[a][b] = a*b
  int unit = 0;

  int size() const { return static_cast<int>(names.size()); }
  int mul(int a, int b) const { return table[a][b]; }
  void check() const;  // associativity and unit laws over the full table

  static DiscreteMonoid trivial();
  static DiscreteMonoid cyclic(int n);        // Z/n as a group
  static DiscreteMonoid right_trivial3();     // {e,a,b}: x y = y off the unit
};

// right action of a monoid on a finite set
struct RightModule {
  int size = 0;
  std::vector<std::vector<int>> act;  // act[x][q]

  void check(const DiscreteMonoid& q) const;  // NotAnAction on violations
  static RightModule point(const DiscreteMonoid& q);
  static RightModule regular(const DiscreteMonoid& q);  // F = Q
};

// B(F,Q)_n = F x Q^n, all simplices materialized as tuples (x, q_1..q_n);
// faces and degeneracies by the standard formulas
struct BarComplex {
  RightModule f;
  DiscreteMonoid q;
  int trunc = 5;

  using Tuple = std::vector<int>;  // [x, q_1, ..., q_n]
  int level_size(int n) const;
  bool is_degenerate(const Tuple& t) const;  // some q_i = e
  Tuple face(const Tuple& t, int i) const;
  Tuple degeneracy(const Tuple& t, int i) const;
  std::vector<Tuple> level(int n) const;

  void check_identities() const;  // d_i d_j = d_{j-1} d_i etc., exhaustive
};

BarComplex bar(const RightModule& f, const DiscreteMonoid& q, int trunc);

// homology of the normalized chains of the truncation, valid up to trunc-1
GradedAbGroup bar_homology(const BarComplex& b);

// the explicit extra degeneracies h_i(q_0..q_n) = (q_0,..,q_{i-1},
// q_i...q_n, e,..,e) on B(Q,Q); verifies all seven relation families
// exhaustively up to max_degree
struct BqqReport {
  struct Failure {
    std::string relation;
    std::vector<int> tuple;
    int i = 0, j = 0;
  };
  std::vector<Failure> failures;
  int checked = 0;
  bool pass() const { return failures.empty(); }
};
BqqReport bqq_contraction_check(const DiscreteMonoid& q, int max_degree);
// same but with a corruptible h (drops the product when corrupt); test hook
BqqReport bqq_contraction_check_impl(const DiscreteMonoid& q, int max_degree,
                                     bool corrupt_h);

// Nondegenerate part of the Mayer-Vietoris blow-up of a directed cover:
// level n = strict chains i_0 < ... < i_n with one simplex per component of
// the intersection; all faces of strict chains stay nondegenerate.
struct MvComplex {
  struct Simplex {
    std::vector<int> chain;
    int cell;  // representative cell of the component
    std::vector<int> faces;
  };
  std::vector<std::vector<Simplex>> levels;

  void check_identities() const;
  ChainComplexZ chains() const;
};

MvComplex mv_blowup(const DirectedCover& cover);

// simplicial homology of the base complex (vertex order orients simplices)
GradedAbGroup cell_homology(const CellComplex& k);

// cover of a directed simplicial complex by its vertex stars, with the
// intersection identity st(sigma) = cap st(v_i) verified
DirectedCover star_cover(const CellComplex& z);

// A simplicial map MV(st_Z) -> BQ from labels on the edges of Z; valid iff
// the labels multiply around every triangle (label(01) label(12) =
// label(02)). Returns the failing triangle cell otherwise.
struct MvMapResult {
  bool valid = false;
  int failing_triangle = -1;
  // per level, the tuple of monoid elements attached to each simplex
  std::vector<std::vector<std::vector<int>>> tuples;
};
MvMapResult mv_simplicial_map(const CellComplex& z, const DiscreteMonoid& q,
                              const std::map<int, int>& edge_labels);

}  // namespace gfc
