#pragma once

#include <vector>

#include "gfc/error.hpp"

namespace gfc {

// Finite cell complex as a face poset; open subsets are up-closed cell sets
// (unions of open stars), which makes every cover-theoretic check exact.
// Interval and circle bases carry a chart so generating functions can be
// sampled over their cells.
struct CellComplex {
  std::vector<int> dim;                  // per cell
  std::vector<std::vector<int>> facets;  // codim-1 faces per cell
  std::vector<std::vector<int>> cofacets;

  enum class Chart { none, interval, circle };
  Chart chart = Chart::none;
  double x_lo = 0, x_hi = 1;
  int nseg = 0;

  int size() const { return static_cast<int>(dim.size()); }
  int top_dim() const;

  static CellComplex interval(int nseg, double lo = 0, double hi = 1);
  static CellComplex circle(int nseg);
  // dim <= 2; lists of vertex tuples (vertices implied 0..nv-1)
  static CellComplex simplicial(int nv,
                                const std::vector<std::vector<int>>& simplices);

  void finalize();  // builds cofacets, sanity checks

  bool is_maximal(int cell) const { return cofacets[cell].empty(); }

  // largest open (up-closed) set whose closure lies in the listed maximal
  // cells: c belongs iff every maximal cell over c is listed
  std::vector<char> open_region(const std::vector<int>& max_cells) const;

  bool is_up_closed(const std::vector<char>& set) const;

  // connected components of a cell set under the facet relation
  std::vector<std::vector<int>> components(const std::vector<char>& set) const;

  // chart of 1-dimensional bases: representative x parameters for a cell
  std::vector<double> cell_samples(int cell, int k) const;

  // vertices (dim-0 cells) of a cell, for chart bases
  std::vector<int> cell_vertices(int cell) const;
};

inline std::vector<char> intersect(const std::vector<char>& a,
                                   const std::vector<char>& b) {
  std::vector<char> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

inline bool any_of(const std::vector<char>& a) {
  for (char c : a)
    if (c) return true;
  return false;
}

// barycentric subdivision: cells of sd are chains of cells of the input;
// exposes the chain data so star covers can be built on it
struct Subdivision {
  CellComplex sd;
  std::vector<std::vector<int>> chain;  // per sd-cell, the source chain
                                        // (increasing in the face order)
  int top_of(int sd_cell) const { return chain[sd_cell].back(); }
};

Subdivision barycentric_subdivision(const CellComplex& k);

}  // namespace gfc
