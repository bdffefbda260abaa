#include "gfc/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace gfc {

size_t CubicalField::vertex_count() const {
  size_t n = 1;
  for (int np : npoints) n *= static_cast<size_t>(np);
  return n;
}

void CubicalField::check() const {
  const size_t d = npoints.size();
  require(d >= 1 && lo.size() == d && hi.size() == d, "SchemaError",
          "cubical field: axis arrays inconsistent");
  for (size_t i = 0; i < d; ++i) {
    require(npoints[i] >= 2, "SchemaError", "cubical field: need >= 2 points");
    require(hi[i] > lo[i], "SchemaError", "cubical field: empty box");
  }
  require(values.size() == vertex_count(), "SchemaError",
          "cubical field: sample count mismatch");
}

CubicalField CubicalField::sample(
    std::vector<int> np, std::vector<double> lo, std::vector<double> hi,
    const std::function<double(const std::vector<double>&)>& f) {
  CubicalField fld;
  fld.npoints = std::move(np);
  fld.lo = std::move(lo);
  fld.hi = std::move(hi);
  const int d = fld.dims();
  fld.values.resize(fld.vertex_count());
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  for (size_t lin = 0; lin < fld.values.size(); ++lin) {
    for (int i = 0; i < d; ++i) x[i] = fld.lo[i] + idx[i] * fld.spacing(i);
    fld.values[lin] = f(x);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < fld.npoints[i]) break;
      idx[i] = 0;
    }
  }
  return fld;
}

namespace {

// Cells of the full cubical complex are tuples of "extended" coordinates in
// [0, 2*n_i-2]: even = vertex slot, odd = edge slot. Cell dimension = number
// of odd coordinates. Linear ids are mixed-radix over the extended sizes.
struct Grid {
  const CubicalField& f;
  int d;
  std::vector<int64_t> ext;          // 2*n_i - 1
  std::vector<int64_t> stride;       // cell id strides
  std::vector<int64_t> vstride;      // vertex id strides
  int64_t ncells;

  explicit Grid(const CubicalField& fld) : f(fld), d(fld.dims()) {
    ext.resize(d);
    stride.resize(d);
    vstride.resize(d);
    ncells = 1;
    for (int i = d - 1; i >= 0; --i) {
      ext[i] = 2 * static_cast<int64_t>(f.npoints[i]) - 1;
      stride[i] = (i == d - 1) ? 1 : stride[i + 1] * ext[i + 1];
      vstride[i] = (i == d - 1) ? 1 : vstride[i + 1] * f.npoints[i + 1];
    }
    for (int i = 0; i < d; ++i) ncells *= ext[i];
  }

  void decode(int64_t id, std::vector<int64_t>& e) const {
    for (int i = 0; i < d; ++i) {
      e[i] = id / stride[i];
      id %= stride[i];
    }
  }

  int cell_dim(const std::vector<int64_t>& e) const {
    int k = 0;
    for (int i = 0; i < d; ++i) k += static_cast<int>(e[i] & 1);
    return k;
  }

  // max over the cell's vertices
  double value(const std::vector<int64_t>& e) const {
    int odd_axes[8];
    int odd = 0;
    int64_t base = 0;
    for (int i = 0; i < d; ++i) {
      if (e[i] & 1) {
        odd_axes[odd++] = i;
        base += (e[i] - 1) / 2 * vstride[i];
      } else {
        base += e[i] / 2 * vstride[i];
      }
    }
    double m = f.values[base];
    const int corners = 1 << odd;
    for (int c = 1; c < corners; ++c) {
      int64_t v = base;
      for (int b = 0; b < odd; ++b)
        if (c & (1 << b)) v += vstride[odd_axes[b]];
      m = std::max(m, f.values[v]);
    }
    return m;
  }
};

struct BandComplex {
  Grid grid;
  double a, b;
  std::vector<uint8_t> band;   // 0/1 per cell
  std::vector<uint8_t> alive;  // 0/1 per cell, only meaningful in band
  std::vector<uint8_t> bdcnt, cofcnt;

  BandComplex(const CubicalField& f, double bb, double aa)
      : grid(f), a(aa), b(bb) {}

  bool in_band(int64_t id, std::vector<int64_t>& scratch) const {
    grid.decode(id, scratch);
    double v = grid.value(scratch);
    return v > a && v <= b;
  }

  template <class F>
  void for_faces(const std::vector<int64_t>& e, int64_t id, F&& fn) const {
    for (int i = 0; i < grid.d; ++i)
      if (e[i] & 1) {
        fn(id - grid.stride[i]);
        fn(id + grid.stride[i]);
      }
  }
  template <class F>
  void for_cofaces(const std::vector<int64_t>& e, int64_t id, F&& fn) const {
    for (int i = 0; i < grid.d; ++i)
      if (!(e[i] & 1)) {
        if (e[i] > 0) fn(id - grid.stride[i]);
        if (e[i] < grid.ext[i] - 1) fn(id + grid.stride[i]);
      }
  }

  bool live(int64_t id) const { return band[id] && alive[id]; }
};

}  // namespace

// Shared reduction: returns the core cells (ids) after coreduction passes
// (kill pairs (a,b) with bd(b) = {a}) and free-face collapses (kill (a,b)
// with cob(a) = {b}). Both moves delete the pair and drop the dead cells
// from all other boundaries, which preserves the homology of the relative
// chain complex.
static std::vector<int64_t> reduce_band(BandComplex& bc) {
  Grid& g = bc.grid;
  const int64_t n = g.ncells;
  bc.band.assign(n, 0);
  bc.alive.assign(n, 0);
  bc.bdcnt.assign(n, 0);
  bc.cofcnt.assign(n, 0);

  std::vector<int64_t> e(g.d), e2(g.d);
  for (int64_t id = 0; id < n; ++id) {
    g.decode(id, e);
    double v = g.value(e);
    if (v > bc.a && v <= bc.b) {
      bc.band[id] = 1;
      bc.alive[id] = 1;
    }
  }
  std::deque<int64_t> coq, rdq;
  for (int64_t id = 0; id < n; ++id) {
    if (!bc.band[id]) continue;
    g.decode(id, e);
    int bd = 0, cof = 0;
    bc.for_faces(e, id, [&](int64_t f) { bd += bc.band[f]; });
    bc.for_cofaces(e, id, [&](int64_t c) { cof += bc.band[c]; });
    bc.bdcnt[id] = static_cast<uint8_t>(bd);
    bc.cofcnt[id] = static_cast<uint8_t>(cof);
    if (bd == 1) coq.push_back(id);
    if (cof == 1) rdq.push_back(id);
  }

  auto kill = [&](int64_t id, std::deque<int64_t>& cq, std::deque<int64_t>& rq) {
    bc.alive[id] = 0;
    g.decode(id, e2);
    bc.for_cofaces(e2, id, [&](int64_t c) {
      if (bc.live(c) && --bc.bdcnt[c] == 1) cq.push_back(c);
    });
    bc.for_faces(e2, id, [&](int64_t f) {
      if (bc.live(f) && --bc.cofcnt[f] == 1) rq.push_back(f);
    });
  };

  while (!coq.empty() || !rdq.empty()) {
    while (!coq.empty()) {
      int64_t id = coq.front();
      coq.pop_front();
      if (!bc.live(id) || bc.bdcnt[id] != 1) continue;
      int64_t face = -1;
      g.decode(id, e);
      bc.for_faces(e, id, [&](int64_t f) {
        if (bc.live(f)) face = f;
      });
      if (face < 0) continue;
      kill(id, coq, rdq);
      kill(face, coq, rdq);
    }
    while (!rdq.empty()) {
      int64_t id = rdq.front();
      rdq.pop_front();
      if (!bc.live(id) || bc.cofcnt[id] != 1) continue;
      int64_t cof = -1;
      g.decode(id, e);
      bc.for_cofaces(e, id, [&](int64_t c) {
        if (bc.live(c)) cof = c;
      });
      if (cof < 0) continue;
      kill(id, coq, rdq);
      kill(cof, coq, rdq);
    }
  }

  std::vector<int64_t> core;
  for (int64_t id = 0; id < n; ++id)
    if (bc.live(id)) core.push_back(id);
  return core;
}

namespace {

using CoreComplex = CubicalCore;

CoreComplex build_core(BandComplex& bc, const std::vector<int64_t>& core) {
  Grid& g = bc.grid;
  const int d = g.d;
  std::map<int64_t, std::pair<int, int>> where;  // id -> (degree, index)
  CoreComplex cc;
  cc.ranks.assign(d + 1, 0);
  std::vector<int64_t> e(d);
  for (int64_t id : core) {
    g.decode(id, e);
    int k = g.cell_dim(e);
    where[id] = {k, cc.ranks[k]++};
  }
  cc.cols.assign(d + 1, {});
  for (int k = 0; k <= d; ++k) cc.cols[k].resize(cc.ranks[k]);
  for (int64_t id : core) {
    g.decode(id, e);
    int k = g.cell_dim(e);
    if (k == 0) continue;
    auto& col = cc.cols[k][where[id].second];
    int odd_seen = 0;
    for (int i = 0; i < d; ++i) {
      if (!(e[i] & 1)) continue;
      int sgn = (odd_seen % 2 == 0) ? 1 : -1;
      ++odd_seen;
      for (int dir : {+1, -1}) {
        int64_t fid = id + dir * g.stride[i];
        if (!bc.live(fid)) continue;
        col.push_back({where[fid].second, dir * sgn});
      }
    }
  }
  return cc;
}

void check_thresholds(const CubicalField& f, double b, double a) {
  f.check();
  require(f.boundary_certified, "BoxNotCertified",
          "field not certified linear near the boundary");
  for (double v : f.values)
    require(std::abs(v - b) > f.grid_tolerance &&
                std::abs(v - a) > f.grid_tolerance,
            "ThresholdTooClose",
            "a sample lies within grid_tolerance of a threshold; resample");
}

}  // namespace

CubicalCore cubical_reduce(const CubicalField& field, double b, double a) {
  check_thresholds(field, b, a);
  BandComplex bc(field, b, a);
  std::vector<int64_t> core = reduce_band(bc);
  require(core.size() <= 20000, "CoreTooLarge",
          "reduced complex still has " + std::to_string(core.size()) +
              " cells; refine the grid or thresholds");
  return build_core(bc, core);
}

GradedAbGroup homology_of_core(const CubicalCore& cc) {
  const int d = static_cast<int>(cc.ranks.size()) - 1;
  ChainComplexZ chain;
  chain.ranks.assign(d + 1, 0);
  chain.d.assign(d + 1, IMat());
  for (int k = 0; k <= d; ++k) chain.ranks[k] = cc.ranks[k];
  chain.d[0] = IMat(0, cc.ranks[0]);
  for (int k = 1; k <= d; ++k) {
    IMat m(cc.ranks[k - 1], cc.ranks[k]);
    for (int j = 0; j < cc.ranks[k]; ++j)
      for (auto [row, sgn] : cc.cols[k][j]) m(row, j) += sgn;
    chain.d[k] = m;
  }
  return homology(chain);
}

GradedAbGroup cubical_sublevel_homology(const CubicalField& field, double b,
                                        double a) {
  return homology_of_core(cubical_reduce(field, b, a));
}

std::map<int, int> core_dims_mod_p(const CubicalCore& cc, long p) {
  const int d = static_cast<int>(cc.ranks.size()) - 1;
  // rank of each boundary over F_p by dense elimination on the core
  std::vector<int> rk(d + 2, 0);
  for (int k = 1; k <= d; ++k) {
    if (cc.ranks[k] == 0 || cc.ranks[k - 1] == 0) continue;
    std::vector<std::vector<long>> m(cc.ranks[k - 1],
                                     std::vector<long>(cc.ranks[k], 0));
    for (int j = 0; j < cc.ranks[k]; ++j)
      for (auto [row, sgn] : cc.cols[k][j])
        m[row][j] = ((m[row][j] + sgn) % p + p) % p;
    int rank = 0;
    int rows = cc.ranks[k - 1], colsn = cc.ranks[k];
    for (int col = 0, row = 0; col < colsn && row < rows; ++col) {
      int piv = -1;
      for (int i = row; i < rows; ++i)
        if (m[i][col] % p != 0) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      std::swap(m[piv], m[row]);
      // modular inverse by Fermat
      long inv = 1, base = ((m[row][col]) % p + p) % p, exp = p - 2;
      while (exp) {
        if (exp & 1) inv = inv * base % p;
        base = base * base % p;
        exp >>= 1;
      }
      for (int j2 = col; j2 < colsn; ++j2) m[row][j2] = m[row][j2] * inv % p;
      for (int i = 0; i < rows; ++i) {
        if (i == row || m[i][col] == 0) continue;
        long f = m[i][col];
        for (int j2 = col; j2 < colsn; ++j2)
          m[i][j2] = ((m[i][j2] - f * m[row][j2]) % p + p) % p;
      }
      ++row;
      ++rank;
    }
    rk[k] = rank;
  }
  std::map<int, int> dims;
  for (int k = 0; k <= d; ++k) {
    int dim = cc.ranks[k] - rk[k] - rk[k + 1];
    if (dim != 0) dims[k] = dim;
  }
  return dims;
}

std::map<int, int> cubical_sublevel_dims_mod_p(const CubicalField& field,
                                               double b, double a, long p) {
  return core_dims_mod_p(cubical_reduce(field, b, a), p);
}

}  // namespace gfc
