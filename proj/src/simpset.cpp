#include "gfc/simpset.hpp"

#include <algorithm>
#include <functional>

namespace gfc {

void DiscreteMonoid::check() const {
  const int n = size();
  require(static_cast<int>(table.size()) == n, "SchemaError",
          "multiplication table size mismatch");
  for (int a = 0; a < n; ++a) {
    require(static_cast<int>(table[a].size()) == n, "SchemaError",
            "multiplication table row size mismatch");
    require(mul(unit, a) == a && mul(a, unit) == a, "SchemaError",
            "unit law fails");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        require(mul(mul(a, b), c) == mul(a, mul(b, c)), "SchemaError",
                "associativity fails");
}

DiscreteMonoid DiscreteMonoid::trivial() {
  DiscreteMonoid m;
  m.names = {"e"};
  m.table = {{0}};
  return m;
}

DiscreteMonoid DiscreteMonoid::cyclic(int n) {
  DiscreteMonoid m;
  for (int i = 0; i < n; ++i) m.names.push_back("g" + std::to_string(i));
  m.names[0] = "e";
  m.table.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.table[a][b] = (a + b) % n;
  return m;
}

DiscreteMonoid DiscreteMonoid::right_trivial3() {
  DiscreteMonoid m;
  m.names = {"e", "a", "b"};
  m.table.assign(3, std::vector<int>(3));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) m.table[x][y] = (y == 0) ? x : y;
  return m;
}

void RightModule::check(const DiscreteMonoid& q) const {
  require(static_cast<int>(act.size()) == size, "SchemaError",
          "action table size mismatch");
  for (int x = 0; x < size; ++x) {
    require(static_cast<int>(act[x].size()) == q.size(), "SchemaError",
            "action table row mismatch");
    require(act[x][q.unit] == x, "NotAnAction", "x . e must equal x");
    for (int a = 0; a < q.size(); ++a)
      for (int b = 0; b < q.size(); ++b)
        require(act[act[x][a]][b] == act[x][q.mul(a, b)], "NotAnAction",
                "(x.q).q' must equal x.(qq')");
  }
}

RightModule RightModule::point(const DiscreteMonoid& q) {
  RightModule f;
  f.size = 1;
  f.act.assign(1, std::vector<int>(q.size(), 0));
  return f;
}

RightModule RightModule::regular(const DiscreteMonoid& q) {
  RightModule f;
  f.size = q.size();
  f.act.assign(q.size(), std::vector<int>(q.size()));
  for (int x = 0; x < q.size(); ++x)
    for (int a = 0; a < q.size(); ++a) f.act[x][a] = q.mul(x, a);
  return f;
}

int BarComplex::level_size(int n) const {
  int s = f.size;
  for (int i = 0; i < n; ++i) s *= q.size();
  return s;
}

bool BarComplex::is_degenerate(const Tuple& t) const {
  for (size_t i = 1; i < t.size(); ++i)
    if (t[i] == q.unit) return true;
  return false;
}

BarComplex::Tuple BarComplex::face(const Tuple& t, int i) const {
  const int n = static_cast<int>(t.size()) - 1;
  Tuple out;
  if (i == 0) {
    out.push_back(f.act[t[0]][n >= 1 ? t[1] : q.unit]);
    for (int k = 2; k <= n; ++k) out.push_back(t[k]);
  } else if (i == n) {
    out = t;
    out.pop_back();
  } else {
    out.push_back(t[0]);
    for (int k = 1; k <= n; ++k) {
      if (k == i) {
        out.push_back(q.mul(t[i], t[i + 1]));
        ++k;
      } else {
        out.push_back(t[k]);
      }
    }
  }
  return out;
}

BarComplex::Tuple BarComplex::degeneracy(const Tuple& t, int i) const {
  Tuple out;
  out.insert(out.end(), t.begin(), t.begin() + (i + 1));
  out.push_back(q.unit);
  out.insert(out.end(), t.begin() + (i + 1), t.end());
  return out;
}

std::vector<BarComplex::Tuple> BarComplex::level(int n) const {
  std::vector<Tuple> out;
  Tuple t(n + 1, 0);
  for (;;) {
    out.push_back(t);
    int p = n;
    for (; p >= 0; --p) {
      int lim = (p == 0) ? f.size : q.size();
      if (++t[p] < lim) break;
      t[p] = 0;
    }
    if (p < 0) break;
  }
  return out;
}

void BarComplex::check_identities() const {
  for (int n = 2; n <= trunc; ++n)
    for (const Tuple& t : level(n)) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j <= n; ++j)
          require(face(face(t, j), i) == face(face(t, i), j - 1), "SchemaError",
                  "simplicial identity d_i d_j failed");
    }
  // s_j then d_i identities, exhaustive on lower levels
  for (int n = 0; n + 1 <= trunc; ++n)
    for (const Tuple& t : level(n)) {
      for (int j = 0; j <= n; ++j) {
        Tuple sj = degeneracy(t, j);
        require(face(sj, j) == t && face(sj, j + 1) == t, "SchemaError",
                "d_j s_j = id failed");
      }
    }
}

BarComplex bar(const RightModule& f, const DiscreteMonoid& q, int trunc) {
  q.check();
  f.check(q);
  BarComplex b{f, q, trunc};
  b.check_identities();
  return b;
}

GradedAbGroup bar_homology(const BarComplex& b) {
  // normalized chains: nondegenerate tuples only
  std::vector<std::vector<BarComplex::Tuple>> nd(b.trunc + 1);
  std::vector<std::map<BarComplex::Tuple, int>> index(b.trunc + 1);
  for (int n = 0; n <= b.trunc; ++n)
    for (const auto& t : b.level(n))
      if (!b.is_degenerate(t)) {
        index[n][t] = static_cast<int>(nd[n].size());
        nd[n].push_back(t);
      }
  ChainComplexZ c;
  c.ranks.resize(b.trunc + 1);
  c.d.resize(b.trunc + 1);
  for (int n = 0; n <= b.trunc; ++n)
    c.ranks[n] = static_cast<int>(nd[n].size());
  c.d[0] = IMat(0, c.ranks[0]);
  for (int n = 1; n <= b.trunc; ++n) {
    IMat m(c.ranks[n - 1], c.ranks[n]);
    for (int s = 0; s < c.ranks[n]; ++s)
      for (int i = 0; i <= n; ++i) {
        auto ft = b.face(nd[n][s], i);
        if (b.is_degenerate(ft)) continue;
        m(index[n - 1][ft], s) += (i % 2 == 0) ? 1 : -1;
      }
    c.d[n] = m;
  }
  GradedAbGroup h = homology(c);
  // trim to the validity range
  for (auto it = h.deg.begin(); it != h.deg.end();)
    it = it->first >= b.trunc ? h.deg.erase(it) : std::next(it);
  return h;
}

namespace {

using Tuple = BarComplex::Tuple;

// The displayed contraction lives on B(Q,Q)_n = Q^{n+1} with the module
// coordinate in the last slot: d_0 drops q_0, d_i merges (q_{i-1}, q_i),
// the top face acts through the module multiplication. With these faces
// every displayed relation is an identity of tuples.
Tuple bqq_face(const DiscreteMonoid& q, const Tuple& t, int i) {
  const int n = static_cast<int>(t.size()) - 1;
  Tuple out;
  if (i == 0) {
    out.assign(t.begin() + 1, t.end());
  } else {
    for (int k = 0; k < i - 1; ++k) out.push_back(t[k]);
    out.push_back(q.mul(t[i - 1], t[i]));
    for (int k = i + 1; k <= n; ++k) out.push_back(t[k]);
  }
  return out;
}

Tuple bqq_degeneracy(const DiscreteMonoid& q, const Tuple& t, int i) {
  Tuple out;
  out.insert(out.end(), t.begin(), t.begin() + i);
  out.push_back(q.unit);
  out.insert(out.end(), t.begin() + i, t.end());
  return out;
}

Tuple h_map(const DiscreteMonoid& q, const Tuple& t, int i, bool corrupt) {
  // h_i(q_0..q_n) = (q_0,..,q_{i-1}, q_i...q_n, e,..,e) in Q^{n+2}
  const int n = static_cast<int>(t.size()) - 1;
  Tuple out;
  for (int k = 0; k < i; ++k) out.push_back(t[k]);
  if (corrupt) {
    out.push_back(q.unit);  // drops the product term entirely
  } else {
    int prod = t[i];
    for (int k = i + 1; k <= n; ++k) prod = q.mul(prod, t[k]);
    out.push_back(prod);
  }
  while (static_cast<int>(out.size()) < n + 2) out.push_back(q.unit);
  return out;
}

}  // namespace

BqqReport bqq_contraction_check_impl(const DiscreteMonoid& q, int max_degree,
                                     bool corrupt_h) {
  q.check();
  BarComplex b{RightModule::regular(q), q, max_degree + 2};
  BqqReport report;
  auto fail = [&](const std::string& rel, const Tuple& t, int i, int j) {
    report.failures.push_back({rel, t, i, j});
  };
  auto face = [&](const Tuple& t, int i) { return bqq_face(q, t, i); };
  auto degen = [&](const Tuple& t, int i) { return bqq_degeneracy(q, t, i); };
  auto h = [&](const Tuple& t, int i) { return h_map(q, t, i, corrupt_h); };
  auto ce = [&](const Tuple& t) { return Tuple(t.size(), q.unit); };
  for (int n = 0; n <= max_degree; ++n) {
    for (const Tuple& t : b.level(n)) {
      ++report.checked;
      // d_0 h_0 = c_e and d_{n+1} h_n = id
      if (face(h(t, 0), 0) != ce(t)) fail("d0 h0 = c_e", t, 0, 0);
      if (face(h(t, n), n + 1) != t) fail("d_{n+1} h_n = id", t, n, n + 1);
      // d_i h_j = h_{j-1} d_i for i < j
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i < j; ++i)
          if (face(h(t, j), i) != h(face(t, i), j - 1))
            fail("d_i h_j = h_{j-1} d_i", t, i, j);
      // d_{j+1} h_{j+1} = d_{j+1} h_j
      for (int j = 0; j + 1 <= n; ++j)
        if (face(h(t, j + 1), j + 1) != face(h(t, j), j + 1))
          fail("d_{j+1} h_{j+1} = d_{j+1} h_j", t, j, j + 1);
      // d_i h_j = h_j d_{i-1} for i > j + 1
      for (int j = 0; j <= n; ++j)
        for (int i = j + 2; i <= n + 1; ++i)
          if (face(h(t, j), i) != h(face(t, i - 1), j))
            fail("d_i h_j = h_j d_{i-1}", t, i, j);
      // s_i h_j = h_{j+1} s_i for i <= j, s_i h_j = h_j s_{i-1} for i > j
      for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= j; ++i)
          if (degen(h(t, j), i) != h(degen(t, i), j + 1))
            fail("s_i h_j = h_{j+1} s_i", t, i, j);
        for (int i = j + 1; i <= n + 1; ++i)
          if (degen(h(t, j), i) != h(degen(t, i - 1), j))
            fail("s_i h_j = h_j s_{i-1}", t, i, j);
      }
    }
  }
  return report;
}

BqqReport bqq_contraction_check(const DiscreteMonoid& q, int max_degree) {
  return bqq_contraction_check_impl(q, max_degree, false);
}

void MvComplex::check_identities() const {
  for (size_t lev = 2; lev < levels.size(); ++lev)
    for (const Simplex& s : levels[lev])
      for (size_t i = 0; i < s.faces.size(); ++i)
        for (size_t j = i + 1; j < s.faces.size(); ++j) {
          const Simplex& fj = levels[lev - 1][s.faces[j]];
          const Simplex& fi = levels[lev - 1][s.faces[i]];
          require(fj.faces[i] == fi.faces[j - 1], "SchemaError",
                  "MV simplicial identity failed");
        }
}

ChainComplexZ MvComplex::chains() const {
  ChainComplexZ c;
  c.ranks.resize(levels.size());
  c.d.resize(levels.size());
  for (size_t lev = 0; lev < levels.size(); ++lev)
    c.ranks[lev] = static_cast<int>(levels[lev].size());
  c.d[0] = IMat(0, c.ranks[0]);
  for (size_t lev = 1; lev < levels.size(); ++lev) {
    IMat m(c.ranks[lev - 1], c.ranks[lev]);
    for (int s = 0; s < c.ranks[lev]; ++s)
      for (size_t i = 0; i < levels[lev][s].faces.size(); ++i)
        m(levels[lev][s].faces[i], s) += (i % 2 == 0) ? 1 : -1;
    c.d[lev] = m;
  }
  return c;
}

MvComplex mv_blowup(const DirectedCover& cover) {
  try {
    cover.check();
  } catch (const Error& e) {
    if (e.code() == "NotDirected") throw;
    throw;
  }
  MvComplex mv;
  // level 0: components of each region
  mv.levels.emplace_back();
  std::map<std::pair<std::vector<int>, int>, int> index;  // (chain, rep cell)
  auto comp_rep = [&](const std::vector<char>& set) {
    std::vector<std::pair<std::vector<int>, int>> reps;
    for (const auto& comp : cover.base.components(set))
      reps.push_back({comp, comp.front()});
    return reps;
  };
  std::vector<std::vector<int>> prev_chains;
  for (int i = 0; i < cover.count(); ++i)
    for (const auto& [cells, rep] : comp_rep(cover.regions[i])) {
      index[{{i}, rep}] = static_cast<int>(mv.levels[0].size());
      mv.levels[0].push_back({{i}, rep, {}});
    }
  for (int lev = 1;; ++lev) {
    std::vector<MvComplex::Simplex> next;
    // extend chains of the previous level by one larger index
    for (const MvComplex::Simplex& s : mv.levels[lev - 1]) {
      for (int j = 0; j < cover.count(); ++j) {
        if (!cover.less(s.chain.back(), j)) continue;
        std::vector<char> inter(cover.base.size(), 1);
        for (int idx : s.chain) inter = intersect(inter, cover.regions[idx]);
        inter = intersect(inter, cover.regions[j]);
        if (!any_of(inter)) continue;
        std::vector<int> chain = s.chain;
        chain.push_back(j);
        for (const auto& comp : cover.base.components(inter)) {
          // keep only the component containing part of s's component: a
          // chain simplex exists per component of the full intersection
          MvComplex::Simplex ns;
          ns.chain = chain;
          ns.cell = comp.front();
          next.push_back(ns);
        }
      }
    }
    // dedupe (the same chain arises from each of its length-(k-1) prefixes)
    std::map<std::pair<std::vector<int>, int>, int> seen;
    std::vector<MvComplex::Simplex> uniq;
    for (auto& ns : next) {
      auto key = std::make_pair(ns.chain, ns.cell);
      if (seen.count(key)) continue;
      seen[key] = static_cast<int>(uniq.size());
      uniq.push_back(ns);
    }
    if (uniq.empty()) break;
    // faces: drop each chain entry; the face simplex is the component of
    // the wider intersection containing this component's cells
    for (auto& ns : uniq) {
      for (size_t drop = 0; drop < ns.chain.size(); ++drop) {
        std::vector<int> sub;
        for (size_t k2 = 0; k2 < ns.chain.size(); ++k2)
          if (k2 != drop) sub.push_back(ns.chain[k2]);
        std::vector<char> inter(cover.base.size(), 1);
        for (int idx : sub) inter = intersect(inter, cover.regions[idx]);
        int face_id = -1;
        for (const auto& comp : cover.base.components(inter))
          if (std::binary_search(comp.begin(), comp.end(), ns.cell)) {
            face_id = index.count({sub, comp.front()})
                          ? index[{sub, comp.front()}]
                          : -1;
            break;
          }
        require(face_id >= 0, "SchemaError", "MV face lookup failed");
        ns.faces.push_back(face_id);
      }
    }
    mv.levels.push_back(uniq);
    for (size_t s2 = 0; s2 < uniq.size(); ++s2)
      index[{uniq[s2].chain, uniq[s2].cell}] = static_cast<int>(s2);
  }
  mv.check_identities();
  return mv;
}

GradedAbGroup cell_homology(const CellComplex& k) {
  const int top = k.top_dim();
  ChainComplexZ c;
  c.ranks.assign(top + 1, 0);
  c.d.resize(top + 1);
  std::vector<int> local_id(k.size());
  for (int cell = 0; cell < k.size(); ++cell)
    local_id[cell] = c.ranks[k.dim[cell]]++;
  c.d[0] = IMat(0, c.ranks[0]);
  for (int d = 1; d <= top; ++d) c.d[d] = IMat(c.ranks[d - 1], c.ranks[d]);
  for (int cell = 0; cell < k.size(); ++cell) {
    int d = k.dim[cell];
    if (d == 0) continue;
    if (d == 1) {
      // edge a < b: boundary b - a; charted circles orient by traversal
      int a = k.facets[cell][0], b = k.facets[cell][1];
      c.d[1](local_id[b], local_id[cell]) += 1;
      c.d[1](local_id[a], local_id[cell]) -= 1;
    } else {
      // triangle with vertices v0 < v1 < v2: d = (v1v2) - (v0v2) + (v0v1)
      auto vs = k.cell_vertices(cell);
      auto edge_between = [&](int x, int y) {
        for (int e : k.facets[cell]) {
          auto ev = k.cell_vertices(e);
          if ((ev[0] == x && ev[1] == y) || (ev[0] == y && ev[1] == x)) return e;
        }
        raise("SchemaError", "triangle edge lookup failed");
      };
      c.d[2](local_id[edge_between(vs[1], vs[2])], local_id[cell]) += 1;
      c.d[2](local_id[edge_between(vs[0], vs[2])], local_id[cell]) -= 1;
      c.d[2](local_id[edge_between(vs[0], vs[1])], local_id[cell]) += 1;
    }
  }
  return homology(c);
}

DirectedCover star_cover(const CellComplex& z) {
  DirectedCover cover;
  cover.base = z;
  int nv = 0;
  for (int c = 0; c < z.size(); ++c)
    if (z.dim[c] == 0) ++nv;
  for (int v = 0; v < nv; ++v) {
    std::vector<char> star(z.size(), 0);
    for (int c = 0; c < z.size(); ++c) {
      auto vs = z.cell_vertices(c);
      if (std::binary_search(vs.begin(), vs.end(), v)) star[c] = 1;
    }
    cover.regions.push_back(star);
  }
  cover.set_total_order();
  cover.check();
  // st(sigma) = intersection of the vertex stars of sigma
  for (int c = 0; c < z.size(); ++c) {
    auto vs = z.cell_vertices(c);
    std::vector<char> inter(z.size(), 1);
    for (int v : vs) inter = intersect(inter, cover.regions[v]);
    // star of the cell c: everything whose vertex set contains vs
    for (int c2 = 0; c2 < z.size(); ++c2) {
      auto vs2 = z.cell_vertices(c2);
      bool contains = std::includes(vs2.begin(), vs2.end(), vs.begin(), vs.end());
      require(inter[c2] == (contains ? 1 : 0), "SchemaError",
              "star intersection identity failed");
    }
  }
  return cover;
}

MvMapResult mv_simplicial_map(const CellComplex& z, const DiscreteMonoid& q,
                              const std::map<int, int>& edge_labels) {
  q.check();
  MvMapResult out;
  for (int c = 0; c < z.size(); ++c)
    if (z.dim[c] == 1)
      require(edge_labels.count(c), "SchemaError",
              "every edge needs a label");
  // the cocycle condition on 2-simplices
  for (int c = 0; c < z.size(); ++c) {
    if (z.dim[c] != 2) continue;
    auto vs = z.cell_vertices(c);
    auto edge_between = [&](int x, int y) {
      for (int e : z.facets[c]) {
        auto ev = z.cell_vertices(e);
        if ((ev[0] == x && ev[1] == y) || (ev[0] == y && ev[1] == x)) return e;
      }
      raise("SchemaError", "triangle edge lookup failed");
    };
    int q01 = edge_labels.at(edge_between(vs[0], vs[1]));
    int q12 = edge_labels.at(edge_between(vs[1], vs[2]));
    int q02 = edge_labels.at(edge_between(vs[0], vs[2]));
    if (q.mul(q01, q12) != q02) {
      out.valid = false;
      out.failing_triangle = c;
      return out;
    }
  }
  out.valid = true;
  // the full map: per cell, the tuple of consecutive edge labels
  out.tuples.resize(z.top_dim() + 1);
  for (int c = 0; c < z.size(); ++c) {
    auto vs = z.cell_vertices(c);
    std::vector<int> tuple;
    for (size_t i = 0; i + 1 < vs.size(); ++i) {
      // edge between consecutive vertices
      int found = -1;
      for (int e = 0; e < z.size(); ++e) {
        if (z.dim[e] != 1) continue;
        auto ev = z.cell_vertices(e);
        if (ev[0] == vs[i] && ev[1] == vs[i + 1]) found = e;
      }
      require(found >= 0, "SchemaError", "missing edge between vertices");
      tuple.push_back(edge_labels.at(found));
    }
    out.tuples[z.dim[c]].push_back(tuple);
  }
  return out;
}

}  // namespace gfc
