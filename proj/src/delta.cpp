#include "gfc/delta.hpp"

#include <cmath>

#include "gfc/cubical.hpp"
#include "gfc/tube.hpp"

namespace gfc {

namespace {

// slot of the j-th delta fiber coordinate z_j (w, w', v1, v1', ...)
int zslot(int j) { return slot_v(j); }

std::vector<int> unprimed_map(int src_n, int /*dst pairs*/) {
  // source slots (x, w, v_0..v_{src_n-1}) -> (x, z_0, z_{2+2i})
  std::vector<int> m(2 + src_n);
  m[kSlotX] = kSlotX;
  m[kSlotW] = zslot(0);
  for (int i = 0; i < src_n; ++i) m[slot_v(i)] = zslot(2 + 2 * i);
  return m;
}

std::vector<int> primed_map(int src_n, int /*dst pairs*/) {
  std::vector<int> m(2 + src_n);
  m[kSlotX] = kSlotX;
  m[kSlotW] = zslot(1);
  for (int i = 0; i < src_n; ++i) m[slot_v(i)] = zslot(3 + 2 * i);
  return m;
}

}  // namespace

double DeltaFn::eval(double x, const std::vector<double>& z) const {
  std::vector<double> vals(2 + fiber_dim(), 0.0);
  vals[kSlotX] = x;
  for (int j = 0; j < fiber_dim(); ++j) vals[zslot(j)] = z[j];
  return full.eval(vals);
}

Jet2 DeltaFn::fiber_jet(double x, const std::vector<double>& z) const {
  std::vector<double> vals(2 + fiber_dim(), 0.0);
  vals[kSlotX] = x;
  std::vector<int> slots;
  for (int j = 0; j < fiber_dim(); ++j) {
    vals[zslot(j)] = z[j];
    slots.push_back(zslot(j));
  }
  return full.jet(vals, slots);
}

DeltaFn difference(const LinFn& f) {
  DeltaFn d;
  d.base = f.base;
  d.n = f.n;
  auto up = unprimed_map(f.n, f.n);
  auto pr = primed_map(f.n, f.n);
  d.g_part = f.g.reindex(up) - f.g.reindex(pr);
  d.eps = f.epsilon;
  d.eps_prime = f.epsilon;
  d.full = Expr::var(zslot(0)) - Expr::var(zslot(1)) + d.g_part +
           f.epsilon.reindex(up) - f.epsilon.reindex(pr);
  d.w_lo = f.w_lo;
  d.w_hi = f.w_hi;
  d.v_box = f.v_box;
  d.bound = f.bound;
  d.b_declared = f.b_declared_bound;
  d.feature_scale = f.feature_scale;
  return d;
}

QuadForm delta_form(const QuadForm& q) {
  const int n = q.dim();
  RMat m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(2 * i, 2 * j) = q.mat(i, j);
      m(2 * i + 1, 2 * j + 1) = -q.mat(i, j);
    }
  return QuadForm(m);
}

DeltaFn oplus_b_delta(const DeltaFn& f, const QuadForm& q) {
  return oplus_b_delta(f, q, f.bound, f.b_declared);
}

DeltaFn oplus_b_delta(const DeltaFn& f, const QuadForm& q, const Expr& b,
                      bool b_is_declared) {
  require(q.dim() % 2 == 0, "OddDimension",
          "delta stabilization needs an even-dimensional form");
  const int M = q.dim() / 2;  // new coordinate pairs
  DeltaFn out;
  out.base = f.base;
  out.n = f.n + M;
  // new pairs appended: u_j at z_{2+2n+2j}, u'_j one further
  std::vector<int> q_slots(2 * M), chi_up(2 * M, -1), chi_pr(2 * M, -1);
  for (int j = 0; j < M; ++j) {
    q_slots[2 * j] = zslot(2 + 2 * f.n + 2 * j);
    q_slots[2 * j + 1] = zslot(3 + 2 * f.n + 2 * j);
    chi_up[2 * j] = q_slots[2 * j];
    chi_pr[2 * j + 1] = q_slots[2 * j + 1];
  }
  auto up = unprimed_map(f.n + M, out.n);
  auto pr = primed_map(f.n + M, out.n);
  // source-style eps for the output: old eps times the cut-off on the
  // unprimed half of the new coordinates (in source coords: new v-slots)
  std::vector<int> chi_src(2 * M, -1);
  for (int j = 0; j < M; ++j) chi_src[2 * j] = slot_v(f.n + j);
  std::vector<int> chi_src_pr(2 * M, -1);
  for (int j = 0; j < M; ++j) chi_src_pr[2 * j + 1] = slot_v(f.n + j);
  out.eps = Expr::chi(q, b, chi_src) * f.eps;
  out.eps_prime = Expr::chi(q, b, chi_src_pr) * f.eps_prime;
  // assembled expression: the primed epsilon enters with a minus sign,
  // matching the decomposition F = w - w' + G + eps - eps'
  out.g_part = f.g_part + Expr::form(q, q_slots);
  out.full = Expr::var(zslot(0)) - Expr::var(zslot(1)) + out.g_part +
             out.eps.reindex(up) - out.eps_prime.reindex(pr);
  (void)chi_up;
  (void)chi_pr;
  out.w_lo = f.w_lo;
  out.w_hi = f.w_hi;
  out.v_box = f.v_box;
  // support radius of chi_q restricted to the unprimed coordinate subspace
  double bmax = 0;
  {
    std::vector<double> vals(2, 0.0);
    for (double x : f.base.samples(9)) {
      vals[kSlotX] = x;
      bmax = std::max(bmax, b.eval(vals));
    }
  }
  {
    RMat cols(2 * M, M);
    for (int i = 0; i < 2 * M; ++i)
      for (int j = 0; j < M; ++j) cols(i, j) = 2 * q.mat(i, 2 * j);
    RMat pinv = solve(cols.transpose() * cols, cols.transpose());
    double rs = to_double(CutoffProfile{}.support_radius);
    for (int j = 0; j < M; ++j) {
      Rat row(0);
      for (int i = 0; i < 2 * M; ++i) row += abs(pinv(j, i));
      double rad = to_double(row) * rs * std::max(bmax, 0.0);
      out.v_box.push_back({-rad, rad});
    }
  }
  out.bound = b;
  out.b_declared = b_is_declared;
  out.feature_scale = f.feature_scale;
  return out;
}

std::vector<CritPoint> critical_points_delta(const DeltaFn& f, double x) {
  std::vector<std::pair<double, double>> box;
  box.push_back({f.w_lo - 0.25, f.w_hi + 0.25});
  box.push_back({f.w_lo - 0.25, f.w_hi + 0.25});
  for (auto [lo, hi] : f.v_box) {
    double pad = 0.1 * (hi - lo) + 0.25;
    box.push_back({lo - pad, hi + pad});
    box.push_back({lo - pad, hi + pad});
  }
  // reorder: the box above lists (w, w', v1, v1', ...) already
  auto jet = [&f, x](const std::vector<double>& z) { return f.fiber_jet(x, z); };
  return newton_critical_search(jet, box, f.feature_scale / 16.0, x, true);
}

DiffHomologyReport difference_homology_check(const LinFn& f, double x,
                                             const Rat& c,
                                             const std::vector<long>& primes,
                                             int grid_points) {
  require(c > 0, "SchemaError", "band constant must be positive");
  const double cd = to_double(c);
  auto crit = critical_points(f, x);
  for (const CritPoint& p : crit) {
    double a = std::abs(p.value);
    require(a > cd && a < 2 * cd, "CriticalValueOutOfBand",
            "critical value " + std::to_string(p.value) +
                " outside (-2c,-c) u (c,2c)",
            "lemma:difference.homology");
  }

  DiffHomologyReport report;
  report.c = cd;
  DeltaFn df = difference(f);

  const double t_floor = 4 * cd + 2;  // below every delta critical value
  const double ww = t_floor / 2 + 2;
  const int daxes = df.fiber_dim();
  int np = grid_points;
  if (np == 0) np = daxes <= 2 ? 129 : (daxes == 3 ? 65 : 33);

  require(ww > std::max(std::abs(df.w_lo), std::abs(df.w_hi)) + 0.5,
          "BoxNotCertified", "w-walls inside the epsilon support");

  // sampling a difference on a shared lattice hits thresholds exactly, so
  // the axes get incommensurate shifts, retried on collision
  CubicalCore dcore;
  double t_single = 2 * cd + 2;
  CubicalCore low_core, plus_core;
  for (int attempt = 0;; ++attempt) {
    double base_shift = attempt * 1.7e-3 * ww;
    std::vector<int> npts(daxes, np);
    std::vector<double> lo(daxes), hi(daxes);
    for (int axis = 0; axis < 2; ++axis) {
      double s = base_shift * (1 + 0.318 * axis) + 1.3e-4 * ww * axis;
      lo[axis] = -ww - s;
      hi[axis] = ww - s;
    }
    for (int i = 0; i < df.n; ++i) {
      double l = df.v_box[i].first * 1.05 - 0.25;
      double h = df.v_box[i].second * 1.05 + 0.25;
      lo[2 + 2 * i] = l;
      hi[2 + 2 * i] = h + 5.7e-4 * (h - l);
      lo[3 + 2 * i] = l - 3.1e-4 * (h - l);
      hi[3 + 2 * i] = h;
    }
    CubicalField dfield =
        CubicalField::sample(npts, lo, hi, [&](const std::vector<double>& z) {
          return df.eval(x, z);
        });
    dfield.boundary_certified = true;
    try {
      dcore = cubical_reduce(dfield, -2 * cd, -t_floor);
      break;
    } catch (const Error& e) {
      if (e.code() == "ThresholdTooClose" && attempt < 5) continue;
      throw;
    }
  }
  for (int attempt = 0;; ++attempt) {
    double s = attempt * 2.3e-3 * (t_single + 4);
    CubicalField low_field =
        build_sublevel_field(f, x, -(t_single + 2) - s,
                             std::max(2.0, f.w_hi + 1) + 2 * cd + s,
                             grid_points);
    try {
      low_core = cubical_reduce(low_field, 1e-4, -t_single);
      plus_core = cubical_reduce(low_field, 2 * cd, 1e-4);
      break;
    } catch (const Error& e) {
      if (e.code() == "ThresholdTooClose" && attempt < 5) continue;
      throw;
    }
  }
  for (const long p : primes) {
    DiffHomologyReport::PerPrime pp;
    pp.p = p;
    pp.dims_delta = core_dims_mod_p(dcore, p);
    pp.dims_low = core_dims_mod_p(low_core, p);
    pp.dims_plus = core_dims_mod_p(plus_core, p);
    auto total = [](const std::map<int, int>& d) {
      int t = 0;
      for (auto [k, v] : d) t += v;
      return t;
    };
    pp.pass = total(pp.dims_delta) == total(pp.dims_low) * total(pp.dims_plus);
    report.primes.push_back(std::move(pp));
  }
  return report;
}

}  // namespace gfc
