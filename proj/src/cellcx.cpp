#include "gfc/cellcx.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace gfc {

int CellComplex::top_dim() const {
  int d = 0;
  for (int x : dim) d = std::max(d, x);
  return d;
}

void CellComplex::finalize() {
  cofacets.assign(size(), {});
  for (int c = 0; c < size(); ++c)
    for (int f : facets[c]) {
      require(f >= 0 && f < size() && dim[f] == dim[c] - 1, "SchemaError",
              "bad facet relation");
      cofacets[f].push_back(c);
    }
}

CellComplex CellComplex::interval(int nseg, double lo, double hi) {
  require(nseg >= 1, "SchemaError", "interval needs at least one segment");
  CellComplex k;
  k.chart = Chart::interval;
  k.x_lo = lo;
  k.x_hi = hi;
  k.nseg = nseg;
  for (int v = 0; v <= nseg; ++v) {
    k.dim.push_back(0);
    k.facets.push_back({});
  }
  for (int e = 0; e < nseg; ++e) {
    k.dim.push_back(1);
    k.facets.push_back({e, e + 1});
  }
  k.finalize();
  return k;
}

CellComplex CellComplex::circle(int nseg) {
  require(nseg >= 2, "SchemaError", "circle needs at least two segments");
  CellComplex k;
  k.chart = Chart::circle;
  k.x_lo = 0;
  k.x_hi = 1;
  k.nseg = nseg;
  for (int v = 0; v < nseg; ++v) {
    k.dim.push_back(0);
    k.facets.push_back({});
  }
  for (int e = 0; e < nseg; ++e) {
    k.dim.push_back(1);
    k.facets.push_back({e, (e + 1) % nseg});
  }
  k.finalize();
  return k;
}

CellComplex CellComplex::simplicial(
    int nv, const std::vector<std::vector<int>>& simplices) {
  CellComplex k;
  for (int v = 0; v < nv; ++v) {
    k.dim.push_back(0);
    k.facets.push_back({});
  }
  std::map<std::vector<int>, int> edge_id;
  auto want_edge = [&](int a, int b) {
    std::vector<int> e{std::min(a, b), std::max(a, b)};
    auto it = edge_id.find(e);
    if (it != edge_id.end()) return it->second;
    int id = k.size();
    edge_id[e] = id;
    k.dim.push_back(1);
    k.facets.push_back({e[0], e[1]});
    return id;
  };
  // collect edges first (explicit and from triangles)
  std::vector<std::vector<int>> tris;
  for (auto s : simplices) {
    std::sort(s.begin(), s.end());
    require(!s.empty() && s.back() < nv, "SchemaError", "bad simplex");
    if (s.size() == 2) want_edge(s[0], s[1]);
    if (s.size() == 3) {
      want_edge(s[0], s[1]);
      want_edge(s[0], s[2]);
      want_edge(s[1], s[2]);
      tris.push_back(s);
    }
    require(s.size() <= 3, "SchemaError", "desk bases have dimension <= 2");
  }
  for (const auto& s : tris) {
    int id = k.size();
    (void)id;
    k.dim.push_back(2);
    k.facets.push_back({edge_id[{s[0], s[1]}], edge_id[{s[0], s[2]}],
                        edge_id[{s[1], s[2]}]});
  }
  k.finalize();
  return k;
}

std::vector<char> CellComplex::open_region(
    const std::vector<int>& max_cells) const {
  std::vector<char> listed(size(), 0);
  for (int c : max_cells) {
    require(c >= 0 && c < size(), "SchemaError", "region cell out of range");
    require(is_maximal(c), "SchemaError",
            "regions are given by maximal cells only");
    listed[c] = 1;
  }
  // c belongs iff every maximal cell whose closure contains c is listed
  std::vector<char> out(size(), 1);
  for (int c = 0; c < size(); ++c)
    if (is_maximal(c)) out[c] = listed[c];
  // sweep down: a cell belongs only if all its cofacets do
  for (int d = top_dim() - 1; d >= 0; --d)
    for (int c = 0; c < size(); ++c) {
      if (dim[c] != d) continue;
      for (int cf : cofacets[c]) out[c] = out[c] && out[cf];
    }
  return out;
}

bool CellComplex::is_up_closed(const std::vector<char>& set) const {
  for (int c = 0; c < size(); ++c)
    if (set[c])
      for (int cf : cofacets[c])
        if (!set[cf]) return false;
  return true;
}

std::vector<std::vector<int>> CellComplex::components(
    const std::vector<char>& set) const {
  std::vector<int> comp(size(), -1);
  std::vector<std::vector<int>> out;
  for (int c = 0; c < size(); ++c) {
    if (!set[c] || comp[c] >= 0) continue;
    std::vector<int> stack{c}, cells;
    comp[c] = static_cast<int>(out.size());
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      cells.push_back(cur);
      auto visit = [&](int nb) {
        if (set[nb] && comp[nb] < 0) {
          comp[nb] = comp[c];
          stack.push_back(nb);
        }
      };
      for (int f : facets[cur]) visit(f);
      for (int cf : cofacets[cur]) visit(cf);
    }
    std::sort(cells.begin(), cells.end());
    out.push_back(std::move(cells));
  }
  // canonical order: by smallest cell id
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> CellComplex::cell_vertices(int cell) const {
  if (dim[cell] == 0) return {cell};
  std::vector<int> vs;
  std::vector<int> stack{cell};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    if (dim[c] == 0)
      vs.push_back(c);
    else
      for (int f : facets[c]) stack.push_back(f);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::vector<double> CellComplex::cell_samples(int cell, int k) const {
  require(chart != Chart::none, "SchemaError",
          "cell sampling needs a charted base");
  double seg = (x_hi - x_lo) / nseg;
  if (dim[cell] == 0) {
    return {x_lo + cell * seg};
  }
  int e = cell - (chart == Chart::interval ? nseg + 1 : nseg);
  require(e >= 0 && e < nseg, "SchemaError", "bad edge cell");
  std::vector<double> xs;
  for (int i = 0; i < k; ++i)
    xs.push_back(x_lo + seg * (e + (i + 0.5) / k));
  return xs;
}

Subdivision barycentric_subdivision(const CellComplex& k) {
  Subdivision out;
  // vertices of sd = cells of k; build all strictly increasing face chains
  std::vector<std::vector<int>> chains;
  for (int c = 0; c < k.size(); ++c) chains.push_back({c});
  // extend chains upward through the face relation (faces of faces too)
  // face closure: c' < c iff c' reachable through facets
  std::vector<std::vector<char>> below(k.size(), std::vector<char>(k.size(), 0));
  for (int c = 0; c < k.size(); ++c) {
    std::vector<int> stack{c};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int f : k.facets[cur]) {
        if (!below[c][f]) {
          below[c][f] = 1;
          stack.push_back(f);
        }
      }
    }
  }
  // enumerate all strictly increasing chains in the face order
  chains.clear();
  std::vector<int> cur;
  std::function<void(int)> grow = [&](int last) {
    chains.push_back(cur);
    for (int c = 0; c < k.size(); ++c)
      if (below[c][last]) {
        cur.push_back(c);
        grow(c);
        cur.pop_back();
      }
  };
  for (int c = 0; c < k.size(); ++c) {
    cur = {c};
    grow(c);
  }
  // chains collected include the singletons; build the sd complex
  std::map<std::vector<int>, int> id;
  CellComplex sd;
  for (const auto& ch : chains) {
    id[ch] = sd.size();
    sd.dim.push_back(static_cast<int>(ch.size()) - 1);
    sd.facets.push_back({});
  }
  for (const auto& ch : chains) {
    if (ch.size() < 2) continue;
    int me = id[ch];
    for (size_t drop = 0; drop < ch.size(); ++drop) {
      std::vector<int> sub;
      for (size_t i = 0; i < ch.size(); ++i)
        if (i != drop) sub.push_back(ch[i]);
      sd.facets[me].push_back(id[sub]);
    }
  }
  sd.finalize();
  out.sd = std::move(sd);
  out.chain.assign(chains.begin(), chains.end());
  return out;
}

}  // namespace gfc
