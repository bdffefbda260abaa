#include "gfc/qbundle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace gfc {

void DirectedCover::set_total_order() {
  const int n = count();
  strictly_less.assign(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) strictly_less[i][j] = 1;
}

void DirectedCover::check() const {
  const int n = count();
  require(n >= 1, "SchemaError", "cover needs at least one region");
  require(static_cast<int>(strictly_less.size()) == n, "SchemaError",
          "order table size mismatch");
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(regions[i].size()) == base.size(), "SchemaError",
            "region bitmap size mismatch");
    require(any_of(regions[i]), "SchemaError",
            "region " + std::to_string(i) + " is empty");
    require(base.is_up_closed(regions[i]), "SchemaError",
            "region " + std::to_string(i) + " is not open (up-closed)");
    require(!strictly_less[i][i], "SchemaError", "order not irreflexive");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (strictly_less[i][j] && strictly_less[j][k])
          require(strictly_less[i][k] && !strictly_less[k][i], "SchemaError",
                  "order not transitive/antisymmetric");
  for (int c = 0; c < base.size(); ++c) {
    std::vector<int> owners;
    for (int i = 0; i < n; ++i)
      if (regions[i][c]) owners.push_back(i);
    require(!owners.empty(), "SchemaError",
            "cell " + std::to_string(c) + " is uncovered");
    for (size_t a = 0; a < owners.size(); ++a)
      for (size_t b = a + 1; b < owners.size(); ++b)
        require(less(owners[a], owners[b]) || less(owners[b], owners[a]),
                "NotDirected",
                "indices containing a common cell must be totally ordered");
  }
}

const QuadForm& QCocycle::q_at(int i, int j, int cell) const {
  auto it = q.find({i, j});
  require(it != q.end(), "SchemaError",
          "no transition data for pair (" + std::to_string(i) + "," +
              std::to_string(j) + ")");
  auto comps = cover.base.components(cover.overlap(i, j));
  for (size_t cidx = 0; cidx < comps.size(); ++cidx)
    if (std::binary_search(comps[cidx].begin(), comps[cidx].end(), cell))
      return it->second[cidx];
  raise("SchemaError", "cell not in the requested overlap");
}

void QCocycle::check_shapes() const {
  cover.check();
  require(static_cast<int>(dims.size()) == cover.count(), "SchemaError",
          "dims per index required");
  for (int i = 0; i < cover.count(); ++i)
    for (int j = 0; j < cover.count(); ++j) {
      if (i == j || !cover.less(i, j)) continue;
      auto ov = cover.overlap(i, j);
      if (!any_of(ov)) continue;
      require(dims[j] >= dims[i], "OrderObstruction",
              "overlapping regions with decreasing fiber dimensions");
      auto comps = cover.base.components(ov);
      auto it = q.find({i, j});
      require(it != q.end(), "SchemaError",
              "missing transition data for an overlapping pair");
      require(it->second.size() == comps.size(), "SchemaError",
              "one form per overlap component required");
      for (const QuadForm& f : it->second) {
        require(f.dim() == dims[j] - dims[i], "SchemaError",
                "transition form dimension must be n_j - n_i");
        check_quadform(f);
      }
    }
}

VerifyReport verify(const QCocycle& c) {
  c.check_shapes();
  VerifyReport report;
  const int n = c.cover.count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!(c.cover.less(i, j) && c.cover.less(j, k))) continue;
        auto triple = intersect(c.cover.overlap(i, j), c.cover.regions[k]);
        if (!any_of(triple)) continue;
        for (const auto& comp : c.cover.base.components(triple)) {
          int cell = comp.front();
          QuadForm lhs = direct_sum(c.q_at(i, j, cell), c.q_at(j, k, cell));
          if (!(lhs == c.q_at(i, k, cell)))
            report.violations.push_back({i, j, k, cell});
        }
      }
  return report;
}

QCocycle refine(const QCocycle& c, const DirectedCover& finer,
                const std::vector<int>& sigma) {
  c.check_shapes();
  finer.check();
  require(finer.base.size() == c.cover.base.size(), "NotARefinement",
          "refinement must live on the same base complex");
  require(static_cast<int>(sigma.size()) == finer.count(), "NotARefinement",
          "sigma must map every new index");
  for (int j = 0; j < finer.count(); ++j) {
    require(sigma[j] >= 0 && sigma[j] < c.cover.count(), "NotARefinement",
            "sigma out of range");
    for (int cell = 0; cell < finer.base.size(); ++cell)
      require(!finer.regions[j][cell] || c.cover.regions[sigma[j]][cell],
              "NotARefinement", "new region not inside its image region");
  }
  for (int cell = 0; cell < finer.base.size(); ++cell)
    for (int j1 = 0; j1 < finer.count(); ++j1)
      for (int j2 = 0; j2 < finer.count(); ++j2) {
        if (!(finer.regions[j1][cell] && finer.regions[j2][cell])) continue;
        if (!finer.less(j1, j2)) continue;
        require(sigma[j1] == sigma[j2] || c.cover.less(sigma[j1], sigma[j2]),
                "NotARefinement", "sigma not pointwise non-decreasing");
      }

  QCocycle out;
  out.cover = finer;
  for (int j = 0; j < finer.count(); ++j) out.dims.push_back(c.dims[sigma[j]]);
  for (int j1 = 0; j1 < finer.count(); ++j1)
    for (int j2 = 0; j2 < finer.count(); ++j2) {
      if (!finer.less(j1, j2)) continue;
      auto ov = finer.overlap(j1, j2);
      if (!any_of(ov)) continue;
      std::vector<QuadForm> forms;
      for (const auto& comp : finer.base.components(ov)) {
        if (sigma[j1] == sigma[j2])
          forms.push_back(QuadForm());
        else
          forms.push_back(c.q_at(sigma[j1], sigma[j2], comp.front()));
      }
      out.q[{j1, j2}] = std::move(forms);
    }
  out.check_shapes();
  return out;
}

WellOrdered well_order(const QCocycle& c) {
  c.check_shapes();
  const int n = c.cover.count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (c.dims[a] != c.dims[b]) return c.dims[a] < c.dims[b];
    return a < b;
  });
  std::vector<int> pos(n);
  for (int p = 0; p < n; ++p) pos[order[p]] = p;

  WellOrdered out;
  out.old_index = order;
  QCocycle& oc = out.cocycle;
  oc.cover.base = c.cover.base;
  oc.cover.regions.resize(n);
  oc.dims.resize(n);
  for (int p = 0; p < n; ++p) {
    oc.cover.regions[p] = c.cover.regions[order[p]];
    oc.dims[p] = c.dims[order[p]];
  }
  oc.cover.set_total_order();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int i = order[a], j = order[b];
      auto ov = c.cover.overlap(i, j);
      if (!any_of(ov)) continue;
      // overlapping pairs are comparable; the sort respects their old
      // orientation, so data never needs to flip
      require(c.cover.less(i, j), "OrderObstruction",
              "overlapping pair ordered against its fiber dimensions");
      oc.q[{a, b}] = c.q.at({i, j});
    }
  oc.check_shapes();
  return out;
}

TotalOrderRefinement total_order_refinement(const QCocycle& c) {
  c.check_shapes();
  const CellComplex& k = c.cover.base;
  TotalOrderRefinement out;
  out.subdivision = barycentric_subdivision(k);
  const Subdivision& sd = out.subdivision;

  // new index set J = cells of k, ordered by (dimension, id); region of j =
  // star of the sd-vertex j = chains through j
  std::vector<int> jorder(k.size());
  std::iota(jorder.begin(), jorder.end(), 0);
  std::sort(jorder.begin(), jorder.end(), [&](int a, int b) {
    if (k.dim[a] != k.dim[b]) return k.dim[a] < k.dim[b];
    return a < b;
  });
  std::vector<int> jpos(k.size());
  for (int p = 0; p < k.size(); ++p) jpos[jorder[p]] = p;

  QCocycle& oc = out.cocycle;
  oc.cover.base = sd.sd;
  oc.cover.regions.assign(k.size(), std::vector<char>(sd.sd.size(), 0));
  for (int sc = 0; sc < sd.sd.size(); ++sc)
    for (int memb : sd.chain[sc])
      oc.cover.regions[jpos[memb]][sc] = 1;
  oc.cover.set_total_order();

  // refinement map r(j) = max { i : st_k(j) inside U_i }
  out.to_old.resize(k.size());
  for (int j = 0; j < k.size(); ++j) {
    // closed star of j: cells with j in their closure, plus j itself
    std::vector<char> star(k.size(), 0);
    star[j] = 1;
    for (int c2 = 0; c2 < k.size(); ++c2) {
      std::vector<int> stack{c2};
      bool hit = false;
      std::set<int> seen;
      while (!stack.empty() && !hit) {
        int cur = stack.back();
        stack.pop_back();
        if (cur == j) hit = true;
        for (int f : k.facets[cur])
          if (seen.insert(f).second) stack.push_back(f);
      }
      if (hit) star[c2] = 1;
    }
    int best = -1;
    for (int i = 0; i < c.cover.count(); ++i) {
      bool inside = true;
      for (int c2 = 0; c2 < k.size(); ++c2)
        inside &= !star[c2] || c.cover.regions[i][c2];
      if (!inside) continue;
      if (best < 0 || c.cover.less(best, i)) best = i;
    }
    require(best >= 0, "TooCoarse",
            "a closed star fits in no region; subdivide the base first");
    out.to_old[jpos[j]] = best;
  }

  for (int p = 0; p < k.size(); ++p) oc.dims.push_back(c.dims[out.to_old[p]]);
  for (int a = 0; a < k.size(); ++a)
    for (int b = a + 1; b < k.size(); ++b) {
      auto ov = oc.cover.overlap(a, b);
      if (!any_of(ov)) continue;
      int ia = out.to_old[a], ib = out.to_old[b];
      require(ia == ib || c.cover.less(ia, ib), "TooCoarse",
              "refinement map not monotone");
      std::vector<QuadForm> forms;
      for (const auto& comp : oc.cover.base.components(ov)) {
        if (ia == ib) {
          forms.push_back(QuadForm());
        } else {
          int base_cell = sd.top_of(comp.front());
          forms.push_back(c.q_at(ia, ib, base_cell));
        }
      }
      oc.q[{a, b}] = std::move(forms);
    }
  oc.check_shapes();
  return out;
}

CocycleHomotopy make_interpolated_homotopy(const QCocycle& c,
                                           const std::vector<Rat>& ts) {
  CocycleHomotopy h;
  h.ts = ts;
  for (const auto& [pair, forms] : c.q) {
    int gap = c.dims[pair.second] - c.dims[pair.first];
    require(gap % 2 == 0, "OddGap",
            "interpolated homotopies need even dimension gaps");
    QuadForm target = hyperbolic(gap / 2);
    std::vector<std::vector<QuadForm>> per_comp;
    for (const QuadForm& f : forms) {
      std::vector<QuadForm> samples;
      for (const Rat& t : ts)
        samples.push_back(homotopy_to_hyperbolic(f, target, t));
      per_comp.push_back(std::move(samples));
    }
    h.samples[pair] = std::move(per_comp);
  }
  return h;
}

UntwistResult untwist(const QCocycle& c, const CocycleHomotopy& homotopy) {
  c.check_shapes();
  const int n = c.cover.count();
  // well-ordered input required
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      require(c.cover.less(i, j) && c.dims[i] <= c.dims[j], "SchemaError",
              "untwist requires a well-ordered cocycle");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      require((c.dims[j] - c.dims[i]) % 2 == 0, "OddGap",
              "all dimension gaps must be even");
  require(verify(c).pass(), "SchemaError", "input fails the cocycle law");

  // validate the homotopy: endpoints and the cocycle law at each time
  require(!homotopy.ts.empty() && homotopy.ts.front() == 0 &&
              homotopy.ts.back() == 1,
          "SchemaError", "homotopy must be sampled from t=0 to t=1");
  for (size_t tidx = 0; tidx < homotopy.ts.size(); ++tidx) {
    QCocycle at_t = c;
    for (auto& [pair, forms] : at_t.q) {
      auto it = homotopy.samples.find(pair);
      require(it != homotopy.samples.end(), "SchemaError",
              "homotopy missing a pair");
      require(it->second.size() == forms.size(), "SchemaError",
              "homotopy component count mismatch");
      for (size_t comp = 0; comp < forms.size(); ++comp) {
        require(it->second[comp].size() == homotopy.ts.size(), "SchemaError",
                "homotopy sample count mismatch");
        forms[comp] = it->second[comp][tidx];
      }
    }
    if (tidx == 0)
      require(at_t.q == c.q, "HomotopyNotCocycle",
              "homotopy does not start at the cocycle");
    if (tidx + 1 == homotopy.ts.size())
      for (auto& [pair, forms] : at_t.q)
        for (auto& f : forms)
          require(f == hyperbolic((c.dims[pair.second] - c.dims[pair.first]) / 2),
                  "HomotopyNotCocycle",
                  "homotopy does not end at the hyperbolic form");
    require(verify(at_t).pass(), "HomotopyNotCocycle",
            "homotopy fails the cocycle law at an intermediate time");
  }

  // downward induction: Q_last = unit; otherwise q_ij + Q_j on the smallest
  // higher region containing the cell, hyperbolic filler elsewhere
  UntwistResult out;
  out.q_i.resize(n);
  const int top = c.dims[n - 1];
  for (int i = n - 1; i >= 0; --i) {
    for (int cell = 0; cell < c.cover.base.size(); ++cell) {
      if (!c.cover.regions[i][cell]) continue;
      int j = -1;
      for (int cand = i + 1; cand < n && j < 0; ++cand)
        if (c.cover.regions[cand][cell]) j = cand;
      if (j < 0) {
        out.q_i[i][cell] = hyperbolic((top - c.dims[i]) / 2);
      } else {
        out.q_i[i][cell] = direct_sum(c.q_at(i, j, cell), out.q_i[j][cell]);
      }
    }
  }
  // the gluing law, exhaustively and exactly
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int cell = 0; cell < c.cover.base.size(); ++cell) {
        if (!(c.cover.regions[i][cell] && c.cover.regions[j][cell])) continue;
        require(direct_sum(c.q_at(i, j, cell), out.q_i[j][cell]) ==
                    out.q_i[i][cell],
                "SchemaError", "untwist postcondition violated");
      }
  return out;
}

namespace {

int signed_sgn(const QCocycle& c, int from, int to, int cell) {
  if (from == to) return 0;
  if (c.cover.less(from, to))
    return invariants(c.q_at(from, to, cell)).signature;
  require(c.cover.less(to, from), "NotDirected",
          "transition between incomparable indices");
  return -invariants(c.q_at(to, from, cell)).signature;
}

int max_owner(const QCocycle& c, int cell) {
  int best = -1;
  for (int i = 0; i < c.cover.count(); ++i)
    if (c.cover.regions[i][cell] && (best < 0 || c.cover.less(best, i)))
      best = i;
  require(best >= 0, "SchemaError", "uncovered cell");
  return best;
}

}  // namespace

int maslov_pairing(const QCocycle& c, const std::vector<int>& edge_loop) {
  c.check_shapes();
  const CellComplex& k = c.cover.base;
  const size_t L = edge_loop.size();
  require(L >= 2, "SchemaError", "a loop needs at least two edges");
  int total = 0;
  int prev_vertex = -1;
  for (size_t s = 0; s < L; ++s) {
    int e = edge_loop[s];
    int e_next = edge_loop[(s + 1) % L];
    require(k.dim[e] == 1, "SchemaError", "loops are lists of edge cells");
    auto va = k.cell_vertices(e);
    auto vb = k.cell_vertices(e_next);
    std::vector<int> shared;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                          std::back_inserter(shared));
    require(!shared.empty(), "SchemaError",
            "consecutive loop edges share no vertex");
    int v = shared.front();
    if (shared.size() > 1 && shared.front() == prev_vertex) v = shared[1];
    int a = max_owner(c, e);
    int b = max_owner(c, v);
    int a_next = max_owner(c, e_next);
    // a -> b on the edge (both contain it: owners of v contain its cofaces)
    total += signed_sgn(c, a, b, e);
    total += signed_sgn(c, b, a_next, e_next);
    prev_vertex = v;
  }
  return total;
}

std::vector<std::pair<std::vector<int>, int>> maslov_class(const QCocycle& c) {
  c.check_shapes();
  // nerve with one node per (index, region component) and one edge per
  // overlap component; fundamental cycles from a spanning forest
  struct Node {
    int index, comp;
  };
  std::vector<Node> nodes;
  std::map<std::pair<int, int>, int> node_id;
  auto comp_of = [&](int i, int cell) {
    auto comps = c.cover.base.components(c.cover.regions[i]);
    for (size_t cc = 0; cc < comps.size(); ++cc)
      if (std::binary_search(comps[cc].begin(), comps[cc].end(), cell))
        return static_cast<int>(cc);
    raise("SchemaError", "component lookup failed");
  };
  for (int i = 0; i < c.cover.count(); ++i) {
    auto comps = c.cover.base.components(c.cover.regions[i]);
    for (size_t cc = 0; cc < comps.size(); ++cc) {
      node_id[{i, static_cast<int>(cc)}] = static_cast<int>(nodes.size());
      nodes.push_back({i, static_cast<int>(cc)});
    }
  }
  struct NEdge {
    int from, to, weight, cell;
  };
  std::vector<NEdge> edges;
  for (int i = 0; i < c.cover.count(); ++i)
    for (int j = 0; j < c.cover.count(); ++j) {
      if (!c.cover.less(i, j)) continue;
      auto ov = c.cover.overlap(i, j);
      if (!any_of(ov)) continue;
      for (const auto& comp : c.cover.base.components(ov)) {
        int cell = comp.front();
        edges.push_back({node_id[{i, comp_of(i, cell)}],
                         node_id[{j, comp_of(j, cell)}],
                         invariants(c.q_at(i, j, cell)).signature, cell});
      }
    }
  // spanning forest by BFS over the node set in order
  const int nn = static_cast<int>(nodes.size());
  std::vector<int> parent_edge(nn, -1), parent(nn, -1), depth(nn, 0);
  std::vector<char> seen(nn, 0);
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> order;
  for (int root = 0; root < nn; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::vector<int> queue{root};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int cur = queue[qi];
      for (size_t ei = 0; ei < edges.size(); ++ei) {
        const NEdge& e = edges[ei];
        int other = e.from == cur ? e.to : (e.to == cur ? e.from : -1);
        if (other < 0 || seen[other]) continue;
        seen[other] = 1;
        parent[other] = cur;
        parent_edge[other] = static_cast<int>(ei);
        depth[other] = depth[cur] + 1;
        queue.push_back(other);
      }
    }
  }
  std::vector<char> in_tree(edges.size(), 0);
  for (int v = 0; v < nn; ++v)
    if (parent_edge[v] >= 0) in_tree[parent_edge[v]] = 1;
  // fundamental cycle per non-tree edge: edge + tree path
  for (size_t ei = 0; ei < edges.size(); ++ei) {
    if (in_tree[ei]) continue;
    const NEdge& e = edges[ei];
    // signed sum along the cycle from e.from to e.to through the tree, then
    // back along e (orientation: tree path ascends/descends, e closes)
    int a = e.from, b = e.to;
    int sum = e.weight;  // traverse e from its 'from' to 'to' (i < j: +sgn)
    std::vector<int> cells{e.cell};
    // walk b up to the common ancestor of a and b, then down to a
    auto lift = [&](int v, int& acc, std::vector<int>& cc, int dir) {
      const NEdge& pe = edges[parent_edge[v]];
      int sgn = pe.weight;
      // the tree edge goes pe.from(=lower index pair) -> pe.to; if we walk
      // against it, flip
      bool walk_up_matches = (pe.to == v);
      acc += dir * (walk_up_matches ? -sgn : sgn);
      cc.push_back(pe.cell);
      return pe.from == v ? pe.to : pe.from;
    };
    int x = b, y = a;
    while (depth[x] > depth[y]) x = lift(x, sum, cells, +1);
    while (depth[y] > depth[x]) y = lift(y, sum, cells, -1);
    while (x != y) {
      x = lift(x, sum, cells, +1);
      y = lift(y, sum, cells, -1);
    }
    out.push_back({cells, sum});
  }
  return out;
}

}  // namespace gfc
