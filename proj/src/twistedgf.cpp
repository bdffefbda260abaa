#include "gfc/twistedgf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>

namespace gfc {

void TwistedGF::check(double tol) const {
  cocycle.check_shapes();
  const int n = cocycle.cover.count();
  require(static_cast<int>(fs.size()) == n, "SchemaError",
          "one function per region required");
  require(cocycle.cover.base.chart != CellComplex::Chart::none, "SchemaError",
          "twisted generating functions need a charted base");
  for (int i = 0; i < n; ++i)
    require(fs[i].n == cocycle.dims[i], "SchemaError",
            "fiber dimension must match the cocycle dims");
  // gluing law f_i (+)_b q_ij = f_j, sampled on overlap cells
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!cocycle.cover.less(i, j)) continue;
      auto ov = cocycle.cover.overlap(i, j);
      if (!any_of(ov)) continue;
      for (const auto& comp : cocycle.cover.base.components(ov)) {
        for (int cell : comp) {
          LinFn glued = oplus_b(fs[i], cocycle.q_at(i, j, cell), bound, false);
          SplitMix64 rng(2024 + cell);
          for (double x : cocycle.cover.base.cell_samples(cell, 3)) {
            for (int pt = 0; pt < 12; ++pt) {
              double w = rng.uniform(-3, 3);
              std::vector<double> v(fs[j].n);
              for (auto& z : v) z = rng.uniform(-2, 2);
              double lhs = glued.eval(x, w, v);
              double rhs = fs[j].eval(x, w, v);
              require(std::abs(lhs - rhs) <= tol, "SchemaError",
                      "gluing law violated on overlap (" + std::to_string(i) +
                          "," + std::to_string(j) + ") near cell " +
                          std::to_string(cell),
                      "lemma:tgf.gluing");
            }
          }
        }
      }
    }
}

namespace {

// one adjacent transposition: swap the entities at positions p and p+1 of
// the current (total) order, rewriting transitions by the four-case rule
// and stabilizing the functions above position p+1
struct State {
  CellComplex base;
  Expr bound;
  std::vector<std::vector<char>> regions;
  std::vector<int> dims;
  std::vector<LinFn> fs;
  std::map<std::pair<int, int>, std::vector<QuadForm>> q;

  QCocycle cocycle() const {
    QCocycle c;
    c.cover.base = base;
    c.cover.regions = regions;
    c.cover.set_total_order();
    c.dims = dims;
    c.q = q;
    return c;
  }
};

std::vector<QuadForm>* find_pair(State& s, int a, int b) {
  auto it = s.q.find({a, b});
  return it == s.q.end() ? nullptr : &it->second;
}

void transpose_step(State& s, int p) {
  const int n = static_cast<int>(s.regions.size());
  const int i = p, i1 = p + 1;  // entities at these positions swap
  const int m = 2 * (s.dims[i1] - s.dims[i]);

  // delta q: constant extension of q_{i,i+1} + (-q_{i,i+1}); constant
  // hyperbolic when the overlap is empty
  QuadForm dq;
  QCocycle as_cocycle = s.cocycle();
  auto ov = intersect(s.regions[i], s.regions[i1]);
  if (!any_of(ov)) {
    dq = hyperbolic(m / 2);
  } else {
    auto* forms = find_pair(s, i, i1);
    require(forms, "SchemaError", "missing transition data");
    for (size_t c = 1; c < forms->size(); ++c)
      require((*forms)[c] == (*forms)[0], "ExtensionObstruction",
              "transition differs across overlap components; no constant "
              "extension of q + (-q) exists at desk scale");
    dq = direct_sum((*forms)[0], negate((*forms)[0]));
  }

  // new transition table, written against the new positions
  std::map<std::pair<int, int>, std::vector<QuadForm>> nq;
  auto old_entity = [&](int newpos) {
    if (newpos == i) return i1;
    if (newpos == i1) return i;
    return newpos;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int ea = old_entity(a), eb = old_entity(b);
      auto ovab = intersect(s.regions[ea], s.regions[eb]);
      if (!any_of(ovab)) continue;
      std::vector<QuadForm> forms;
      auto comps = s.base.components(ovab);
      for (auto& comp : comps) {
        int cell = comp.front();
        auto lookup = [&](int u, int v2) -> QuadForm {
          QCocycle c = as_cocycle;
          return c.q_at(u, v2, cell);
        };
        if (ea == i1 && eb == i) {
          forms.push_back(negate(lookup(i, i1)));
        } else if (ea == i1 && eb > i1) {
          forms.push_back(direct_sum(negate(dq), lookup(i1, eb)));
        } else if (ea < i && (eb == i || eb > i1)) {
          // (q_{ea,eb} + dq) with dq's block moved to offset n_i - n_ea
          QuadForm plain = direct_sum(lookup(ea, eb), dq);
          int n_ka = s.dims[i] - s.dims[ea];
          int n_il = s.dims[eb] - s.dims[i];
          std::vector<int> perm(plain.dim());
          for (int t2 = 0; t2 < n_ka; ++t2) perm[t2] = t2;
          for (int t2 = 0; t2 < m; ++t2) perm[n_ka + t2] = n_ka + n_il + t2;
          for (int t2 = 0; t2 < n_il; ++t2) perm[n_ka + m + t2] = n_ka + t2;
          forms.push_back(permute(plain, perm));
        } else {
          // both before the swap, or ea == i (now at position i1) with
          // eb > i1, or pairs fully after: data unchanged
          forms.push_back(lookup(std::min(ea, eb), std::max(ea, eb)));
        }
      }
      nq[{a, b}] = std::move(forms);
    }

  // functions: entities above the swapped pair (and the old i) gain dq at
  // offset n_i; the old i+1 and everything below keep their functions
  std::vector<LinFn> nfs(n);
  std::vector<int> ndims(n);
  std::vector<std::vector<char>> nregions(n);
  for (int a = 0; a < n; ++a) {
    int e = old_entity(a);
    nregions[a] = s.regions[e];
    if (e < i || e == i1) {
      nfs[a] = s.fs[e];
      ndims[a] = s.dims[e];
    } else {
      LinFn stab = oplus_b(s.fs[e], dq, s.bound, false);
      int n_i = s.dims[i], n_rest = s.dims[e] - s.dims[i];
      std::vector<int> perm(stab.n);
      for (int t2 = 0; t2 < n_i; ++t2) perm[t2] = t2;
      for (int t2 = 0; t2 < m; ++t2) perm[n_i + t2] = n_i + n_rest + t2;
      for (int t2 = 0; t2 < n_rest; ++t2) perm[n_i + m + t2] = n_i + t2;
      nfs[a] = permute_fiber(stab, perm);
      ndims[a] = s.dims[e] + m;
    }
  }
  s.regions = std::move(nregions);
  s.dims = std::move(ndims);
  s.fs = std::move(nfs);
  s.q = std::move(nq);
}

}  // namespace

TwistedGF reorder(const TwistedGF& t, const std::vector<int>& new_order) {
  t.check();
  const int n = t.cocycle.cover.count();
  require(static_cast<int>(new_order.size()) == n, "SchemaError",
          "new order must rank every index");
  // well-ordered input: indices already sorted under the (total) order
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      require(t.cocycle.cover.less(i, j) && t.cocycle.dims[i] <= t.cocycle.dims[j],
              "SchemaError", "reorder requires a well-ordered input");

  State s{t.cocycle.cover.base, t.bound, t.cocycle.cover.regions,
          t.cocycle.dims, t.fs, t.cocycle.q};
  // track which original entity sits at each position, bubble towards the
  // target ranking
  std::vector<int> at(n), rank(n);
  std::iota(at.begin(), at.end(), 0);
  for (int idx = 0; idx < n; ++idx) rank[idx] = new_order[idx];
  for (bool moved = true; moved;) {
    moved = false;
    for (int p = 0; p + 1 < n; ++p) {
      if (rank[at[p]] > rank[at[p + 1]]) {
        transpose_step(s, p);
        std::swap(at[p], at[p + 1]);
        moved = true;
      }
    }
  }
  TwistedGF out;
  out.cocycle = s.cocycle();
  out.fs = s.fs;
  out.bound = t.bound;
  out.check();
  return out;
}

AssembleReport assemble_sigma(const TwistedGF& t) {
  // light validation only: assembly is itself the check that the pieces
  // glue, and reports GluingMismatch with the offending overlap
  t.cocycle.check_shapes();
  require(t.fs.size() == static_cast<size_t>(t.cocycle.cover.count()),
          "SchemaError", "one function per region required");
  AssembleReport report;
  const int n = t.cocycle.cover.count();
  const CellComplex& base = t.cocycle.cover.base;

  // per-region tables at one sample per edge cell
  std::map<std::pair<int, int>, std::vector<CritPoint>> table;  // (i, cell)
  for (int i = 0; i < n; ++i)
    for (int cell = 0; cell < base.size(); ++cell) {
      if (!t.cocycle.cover.regions[i][cell] || base.dim[cell] != 1) continue;
      double x = base.cell_samples(cell, 1)[0];
      auto pts = critical_points(t.fs[i], x);
      table[{i, cell}] = pts;
      report.tables.push_back({i, x, pts});
    }

  // overlap identification and union-find over (region, cell, point index)
  std::map<std::tuple<int, int, size_t>, int> ids;
  std::vector<int> parent;
  auto uf_id = [&](int i, int cell, size_t idx) {
    auto key = std::make_tuple(i, cell, idx);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(parent.size());
    ids[key] = id;
    parent.push_back(id);
    return id;
  };
  std::function<int(int)> find = [&](int a) {
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  // inside a region, link the same sorted index across cells
  for (auto& [key, pts] : table)
    for (size_t idx = 0; idx < pts.size(); ++idx) uf_id(key.first, key.second, idx);
  for (int i = 0; i < n; ++i) {
    std::vector<int> cells;
    for (int cell = 0; cell < base.size(); ++cell)
      if (t.cocycle.cover.regions[i][cell] && base.dim[cell] == 1)
        cells.push_back(cell);
    for (size_t a = 0; a + 1 < cells.size(); ++a) {
      auto &p1 = table[{i, cells[a]}], &p2 = table[{i, cells[a + 1]}];
      for (size_t idx = 0; idx < std::min(p1.size(), p2.size()); ++idx)
        parent[find(uf_id(i, cells[a], idx))] =
            find(uf_id(i, cells[a + 1], idx));
    }
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!t.cocycle.cover.less(i, j)) continue;
      auto ov = t.cocycle.cover.overlap(i, j);
      if (!any_of(ov)) continue;
      for (const auto& comp : base.components(ov)) {
        for (int cell : comp) {
          if (base.dim[cell] != 1) continue;
          const auto& pi = table[{i, cell}];
          const auto& pj = table[{j, cell}];
          if (pi.size() != pj.size())
            raise("GluingMismatch",
                  "critical point counts differ over overlap cell " +
                      std::to_string(cell),
                  "lemma:sigma.gluing");
          std::vector<bool> used(pj.size(), false);
          for (size_t a = 0; a < pi.size(); ++a) {
            bool matched = false;
            for (size_t b2 = 0; b2 < pj.size(); ++b2) {
              if (used[b2]) continue;
              const CritPoint &ca = pi[a], &cb = pj[b2];
              if (std::abs(ca.w - cb.w) > 1e-7 ||
                  std::abs(ca.value - cb.value) > 1e-7)
                continue;
              bool ok = true;
              for (size_t v2 = 0; v2 < cb.v.size(); ++v2) {
                double expect = v2 < ca.v.size() ? ca.v[v2] : 0.0;
                ok &= std::abs(cb.v[v2] - expect) <= 1e-7;
              }
              if (!ok) continue;
              used[b2] = true;
              matched = true;
              report.matches.push_back(
                  {i, j, cell, pi[a].x, a, b2});
              parent[find(uf_id(i, cell, a))] = find(uf_id(j, cell, b2));
              break;
            }
            if (!matched)
              raise("GluingMismatch",
                    "no padded match for a critical point over cell " +
                        std::to_string(cell),
                    "lemma:sigma.gluing");
          }
        }
      }
    }

  std::set<int> roots;
  for (int a = 0; a < static_cast<int>(parent.size()); ++a)
    roots.insert(find(a));
  report.orbit_count = static_cast<int>(roots.size());
  return report;
}

}  // namespace gfc
