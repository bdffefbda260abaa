#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfc/delta.hpp"
#include "gfc/genfun.hpp"
#include "gfc/tube.hpp"

using namespace gfc;

namespace {

QuadForm diag(std::vector<Rat> d) {
  RMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return QuadForm(m);
}

// the bifurcation profile as a linear-at-infinity function: g = 0,
// eps = D(w) - w, bound 3 (valid under the 1.05 sampling safety factor)
LinFn make_d_fn() {
  LinFn f;
  f.base.kind = BaseDesc::Kind::point;
  f.n = 0;
  f.g = Expr();
  f.epsilon = Expr::dmw(Expr::w());
  f.w_lo = -2;
  f.w_hi = 2;
  f.bound = Expr::constant(Rat(3));
  f.b_declared_bound = true;
  f.feature_scale = 1.0;
  return f;
}

LinFn random_linfn(SplitMix64& rng, int n) {
  LinFn f;
  f.base.kind = BaseDesc::Kind::interval;
  f.base.lo = 0;
  f.base.hi = 1;
  f.n = n;
  Expr g;
  for (int i = 0; i < n; ++i)
    g = g + Expr::constant(rng.nonzero_rat(4, 2)) * Expr::v(i) * Expr::v(i) +
        Expr::constant(rng.rat(2, 2)) * Expr::x() * Expr::v(i);
  f.g = g;
  // a compactly supported bump: psi(w^2 + |v|^2 scaled)
  Expr r2 = Expr::w() * Expr::w();
  for (int i = 0; i < n; ++i) r2 = r2 + Expr::v(i) * Expr::v(i);
  f.epsilon = Expr::constant(rng.rat(2, 3)) * Expr::psi(r2);
  double rad = std::sqrt(to_double(CutoffProfile{}.support_radius)) + 0.05;
  f.w_lo = -rad;
  f.w_hi = rad;
  for (int i = 0; i < n; ++i) f.v_box.push_back({-rad, rad});
  f.bound = Expr::constant(Rat(2));  // |eps| <= 2/3 < 2
  f.b_declared_bound = true;
  return f;
}

}  // namespace

TEST_CASE("expression evaluation and jets") {
  Expr e = Expr::pow(Expr::w(), 3) - Expr::constant(Rat(3)) * Expr::w() +
           Expr::v(0) * Expr::x();
  std::vector<double> vals{2.0, 1.5, 0.5};  // x, w, v1
  CHECK(e.eval(vals) == doctest::Approx(1.5 * 1.5 * 1.5 - 4.5 + 1.0));

  std::vector<int> act{kSlotW, slot_v(0)};
  Jet2 j = e.jet(vals, act);
  CHECK(j.g[0] == doctest::Approx(3 * 1.5 * 1.5 - 3));
  CHECK(j.g[1] == doctest::Approx(2.0));
  CHECK(j.hess(0, 0) == doctest::Approx(9.0));
  CHECK(j.hess(0, 1) == doctest::Approx(0.0));

  // jets vs central differences on a messier expression
  Expr m = Expr::psi(Expr::w() * Expr::v(0)) / (Expr::constant(Rat(2)) +
           Expr::pow(Expr::v(0), 2));
  SplitMix64 rng(90001);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p{0.0, rng.uniform(-3, 3), rng.uniform(-2, 2)};
    Jet2 jm = m.jet(p, act);
    const double h = 1e-5;
    for (int i = 0; i < 2; ++i) {
      auto up = p, dn = p;
      up[act[i]] += h;
      dn[act[i]] -= h;
      double fd = (m.eval(up) - m.eval(dn)) / (2 * h);
      CHECK(jm.g[i] == doctest::Approx(fd).epsilon(1e-5));
      for (int k = 0; k <= i; ++k) {
        auto uu = p, ud = p, du = p, dd = p;
        uu[act[i]] += h;
        uu[act[k]] += h;
        ud[act[i]] += h;
        ud[act[k]] -= h;
        du[act[i]] -= h;
        du[act[k]] += h;
        dd[act[i]] -= h;
        dd[act[k]] -= h;
        double fd2 =
            (m.eval(uu) - m.eval(ud) - m.eval(du) + m.eval(dd)) / (4 * h * h);
        CHECK(jm.hess(i, k) == doctest::Approx(fd2).epsilon(2e-3));
      }
    }
  }
}

TEST_CASE("expression JSON parsing") {
  Expr e = parse_expr_json(R"({"op":"+","args":[{"op":"pow","base":{"var":"w"},"exp":3},{"op":"*","args":["-3",{"var":"w"}]}]})");
  CHECK(e.eval({0.0, 2.0}) == doctest::Approx(2.0));  // 8 - 6
  CHECK_THROWS_AS(parse_expr_json("{\"var\":\"z\"}"), Error);
}

TEST_CASE("the D profile") {
  CHECK(d_profile(1.0) == doctest::Approx(-2.0));
  CHECK(d_profile(-1.0) == doctest::Approx(2.0));
  CHECK(d_profile(0.5) == doctest::Approx(0.125 - 1.5));
  CHECK(d_profile(2.0) == doctest::Approx(2.0));
  CHECK(d_profile(3.0) == 3.0);
  CHECK(d_profile(-3.0) == -3.0);
  // C^2 at the junctions, D' > 0 outside [-1, 1]
  for (double w : {1.0, 2.0, -1.0, -2.0}) {
    const double h = 1e-6;
    CHECK(std::abs((d_profile(w + h) - d_profile(w - h)) / (2 * h) -
                   d_profile_d1(w)) < 1e-6);
  }
  for (double w = 1.01; w < 2.2; w += 0.01) {
    CHECK(d_profile_d1(w) > 0);
    CHECK(d_profile_d1(-w) > 0);
  }
  CHECK(d_profile_bound() > 3.0);
  CHECK(d_profile_bound() < 3.06);
}

TEST_CASE("critical points of the pure profile") {
  LinFn f = make_d_fn();
  check_linfn(f);
  auto crit = critical_points(f, 0.0);
  REQUIRE(crit.size() == 2);
  CHECK(crit[0].w == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(crit[0].value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(crit[0].index == 1);
  CHECK(crit[1].w == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(crit[1].value == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(crit[1].index == 0);

  // f = w has no critical points at all
  LinFn lin;
  lin.n = 0;
  lin.g = Expr();
  lin.epsilon = Expr();
  lin.bound = Expr();
  CHECK(critical_points(lin, 0.0).empty());
}

TEST_CASE("g is recovered past the support box") {
  SplitMix64 rng(90002);
  LinFn f = random_linfn(rng, 2);
  check_linfn(f);
  for (int trial = 0; trial < 20; ++trial) {
    double x = rng.uniform(0, 1);
    std::vector<double> v{rng.uniform(-4, 4), rng.uniform(-4, 4)};
    std::vector<double> vals{x, 0.0, v[0], v[1]};
    CHECK(recover_g(f, x, v) == doctest::Approx(f.g.eval(vals)).epsilon(1e-12));
  }
}

TEST_CASE("modified stabilization: unit, bound, associativity") {
  LinFn f = make_d_fn();
  CHECK(oplus_b(f, QuadForm()).n == 0);  // unit form: unchanged

  SplitMix64 rng(90003);
  for (int trial = 0; trial < 4; ++trial) {
    LinFn base = random_linfn(rng, 1);
    QuadForm q1 = random_form(rng, 1), q2 = random_form(rng, 2);
    LinFn lhs = oplus_b(oplus_b(base, q1), q2);
    LinFn rhs = oplus_b(base, direct_sum(q1, q2));
    CHECK(lhs.n == rhs.n);
    for (int pt = 0; pt < 50; ++pt) {
      double x = rng.uniform(0, 1), w = rng.uniform(-4, 4);
      std::vector<double> v(lhs.n);
      for (auto& z : v) z = rng.uniform(-5, 5);
      CHECK(std::abs(lhs.eval(x, w, v) - rhs.eval(x, w, v)) <= 1e-12);
    }
    // bound is preserved
    check_linfn(lhs);
  }
}

TEST_CASE("modified stabilization preserves the critical set") {
  LinFn f = make_d_fn();
  f.feature_scale = 2.0;
  QuadForm q = diag({Rat(-1)});
  LinFn with_cutoff = oplus_b(f, q, Expr::constant(Rat(3)), true);
  LinFn plain = oplus_plain(f, q);
  plain.v_box.back() = {-2.0, 2.0};
  auto a = critical_points(with_cutoff, 0.0);
  auto b = critical_points(plain, 0.0);
  REQUIRE(a.size() == 2);
  CHECK(same_critical_sets(a, b, 1e-8));
  CHECK(a[0].v[0] == doctest::Approx(0.0).epsilon(1e-9));
  // the two functions coincide near the critical set
  for (const auto& c : a)
    CHECK(with_cutoff.eval(0, c.w, c.v) ==
          doctest::Approx(plain.eval(0, c.w, c.v)).epsilon(1e-12));
}

TEST_CASE("doubling of v^2 over a point") {
  PlainFn g;
  g.base.kind = BaseDesc::Kind::point;
  g.n = 1;
  g.g = Expr::v(0) * Expr::v(0);
  g.crit_box = {{-3, 3}};
  g.feature_scale = 1.0;
  Expr alpha = Expr::psi(Expr::constant(Rat(2)) * Expr::v(0) * Expr::v(0));
  std::vector<std::pair<double, double>> abox{{-1.6, 1.6}};

  for (Rat t : {Rat(1, 256), Rat(1, 64), Rat(1, 16)}) {
    DoubleResult res = double_fn(g, alpha, abox, t);
    check_linfn(res.f);
    double td = to_double(t);
    CHECK(res.r == doctest::Approx(4.0 / std::sqrt(3.0) *
                                   std::sqrt(td / (1 + 4 * td))).epsilon(1e-12));
    auto crit = critical_points(res.f, 0.0);
    REQUIRE(crit.size() == 2);
    // points (v, w) = (0, +-r(t)), values -+ s(t)
    CHECK(crit[0].w == doctest::Approx(-res.r).epsilon(1e-7));
    CHECK(crit[1].w == doctest::Approx(res.r).epsilon(1e-7));
    CHECK(crit[0].v[0] == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(crit[0].value == doctest::Approx(res.s).epsilon(1e-7));
    CHECK(crit[1].value == doctest::Approx(-res.s).epsilon(1e-7));
    CHECK(res.t_threshold > td);
  }

  // too large a t fails the admissibility inequality
  CHECK_THROWS_WITH_AS(double_fn(g, alpha, abox, Rat(1, 4)),
                       doctest::Contains("TTooLarge"), Error);
}

TEST_CASE("doubling with constant alpha is the pure profile") {
  PlainFn g;
  g.base.kind = BaseDesc::Kind::point;
  g.n = 0;
  g.g = Expr();
  g.crit_box = {};
  Expr alpha = Expr::constant(Rat(1));
  DoubleResult res = double_fn(g, alpha, {}, Rat(1, 16));
  auto crit = critical_points(res.f, 0.0);
  REQUIRE(crit.size() == 2);
  CHECK(crit[1].w == doctest::Approx(r_of_t(1.0 / 16)).epsilon(1e-10));
  CHECK(crit[1].value == doctest::Approx(d_t(r_of_t(1.0 / 16), 1.0 / 16)).epsilon(1e-10));
}

TEST_CASE("difference function basics") {
  LinFn d = make_d_fn();
  DeltaFn dd = difference(d);
  CHECK(dd.fiber_dim() == 2);
  // diagonal vanishes
  SplitMix64 rng(90004);
  for (int t = 0; t < 20; ++t) {
    double w = rng.uniform(-3, 3);
    CHECK(dd.eval(0, {w, w}) == doctest::Approx(0.0).epsilon(1e-14));
  }
  // interleaving: z = (w, w', ...) evaluates f(w) - f(w')
  double w1 = 0.3, w2 = -1.7;
  CHECK(dd.eval(0, {w1, w2}) ==
        doctest::Approx(d_profile(w1) - d_profile(w2)).epsilon(1e-14));

  dd.feature_scale = 2.0;
  auto crit = critical_points_delta(dd, 0.0);
  REQUIRE(crit.size() == 4);
  std::vector<double> values;
  for (auto& c : crit) values.push_back(c.value);
  std::sort(values.begin(), values.end());
  CHECK(values[0] == doctest::Approx(-4).epsilon(1e-9));
  CHECK(values[1] == doctest::Approx(0).epsilon(1e-9));
  CHECK(values[2] == doctest::Approx(0).epsilon(1e-9));
  CHECK(values[3] == doctest::Approx(4).epsilon(1e-9));
}

TEST_CASE("delta stabilization compatibility identity") {
  LinFn d = make_d_fn();
  QuadForm q = diag({Rat(-1)});
  Expr b3 = Expr::constant(Rat(3));

  DeltaFn lhs = oplus_b_delta(difference(d), delta_form(q), b3, true);
  DeltaFn rhs = difference(oplus_b(d, q, b3, true));
  REQUIRE(lhs.fiber_dim() == rhs.fiber_dim());
  SplitMix64 rng(90005);
  for (int pt = 0; pt < 200; ++pt) {
    std::vector<double> z(lhs.fiber_dim());
    for (auto& v : z) v = rng.uniform(-9, 9);
    CHECK(std::abs(lhs.eval(0, z) - rhs.eval(0, z)) <= 1e-12);
  }

  // unit form leaves the function unchanged
  DeltaFn unit = oplus_b_delta(difference(d), QuadForm(), b3, true);
  CHECK(unit.fiber_dim() == 2);

  CHECK_THROWS_WITH_AS(oplus_b_delta(difference(d), diag({Rat(1)}), b3, true),
                       doctest::Contains("OddDimension"), Error);
}

TEST_CASE("delta stabilization preserves the critical set") {
  LinFn d = make_d_fn();
  DeltaFn dd = difference(d);
  QuadForm h2 = hyperbolic(2);
  DeltaFn with_cutoff = oplus_b_delta(dd, h2, Expr::constant(Rat(3)), true);
  with_cutoff.feature_scale = 32.0;
  // plain direct sum as the second Newton route
  DeltaFn plain = dd;
  plain.n = dd.n + 2;
  std::vector<int> slots{slot_v(2), slot_v(3), slot_v(4), slot_v(5)};
  plain.full = dd.full + Expr::form(h2, slots);
  plain.v_box.push_back({-1.5, 1.5});
  plain.v_box.push_back({-1.5, 1.5});
  plain.feature_scale = 8.0;

  auto a = critical_points_delta(with_cutoff, 0.0);
  auto b = critical_points_delta(plain, 0.0);
  REQUIRE(a.size() == 4);
  CHECK(same_critical_sets(a, b, 1e-8));
}

TEST_CASE("difference homology of the pure profile") {
  LinFn d = make_d_fn();
  auto report = difference_homology_check(d, 0.0, Rat(3, 2), {2, 3});
  CHECK(report.all_pass());
  for (const auto& pp : report.primes) {
    CHECK(pp.dims_delta == std::map<int, int>{{0, 1}});
    CHECK(pp.dims_low == std::map<int, int>{{0, 1}});
    CHECK(pp.dims_plus == std::map<int, int>{{1, 1}});
  }

  // out-of-band critical values are rejected
  CHECK_THROWS_WITH_AS(difference_homology_check(d, 0.0, Rat(3), {2}),
                       doctest::Contains("CriticalValueOutOfBand"), Error);

  // vacuous case: no critical values at all
  LinFn lin;
  lin.n = 0;
  lin.g = Expr();
  lin.epsilon = Expr();
  lin.bound = Expr();
  lin.w_lo = -1;
  lin.w_hi = 1;
  auto vac = difference_homology_check(lin, 0.0, Rat(3, 2), {2});
  CHECK(vac.all_pass());
  CHECK(vac.primes[0].dims_delta.empty());
}

TEST_CASE("difference homology with a negative square") {
  LinFn d = make_d_fn();
  d.feature_scale = 4.0;
  LinFn f = oplus_b(d, diag({Rat(-1)}), Expr::constant(Rat(3)), true);
  auto report = difference_homology_check(f, 0.0, Rat(3, 2), {2}, 33);
  CHECK(report.all_pass());
  // degree-shifted: the single class now sits in degree 1
  CHECK(report.primes[0].dims_delta == std::map<int, int>{{1, 1}});
  CHECK(report.primes[0].dims_low == std::map<int, int>{{1, 1}});
  CHECK(report.primes[0].dims_plus == std::map<int, int>{{2, 1}});
}

TEST_CASE("tube detection") {
  LinFn d = make_d_fn();
  d.feature_scale = 4.0;

  TubeResult t0 = tube_check(oplus_b(d, QuadForm()), 0.0, 129);
  CHECK(t0.degree == 0);
  CHECK(t0.crosschecks_ok);

  TubeResult t1 = tube_check(oplus_b(d, diag({Rat(-1)})), 0.0, 129);
  CHECK(t1.degree == 1);
  CHECK(t1.crosschecks_ok);

  d.feature_scale = 8.0;
  TubeResult t2 = tube_check(oplus_b(d, diag({Rat(-1), Rat(-1)})), 0.0, 65);
  CHECK(t2.degree == 2);
  CHECK(t2.crosschecks_ok);
}

TEST_CASE("fiber permutation") {
  SplitMix64 rng(90006);
  LinFn f = random_linfn(rng, 2);
  LinFn p = permute_fiber(f, {1, 0});
  for (int t = 0; t < 30; ++t) {
    double x = rng.uniform(0, 1), w = rng.uniform(-2, 2);
    double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    CHECK(p.eval(x, w, {a, b}) == doctest::Approx(f.eval(x, w, {b, a})).epsilon(1e-14));
  }
}
