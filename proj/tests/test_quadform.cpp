#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfc/cutoff.hpp"
#include "gfc/quadform.hpp"

using namespace gfc;

namespace {

QuadForm diag(std::vector<Rat> d) {
  RMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return QuadForm(m);
}

}  // namespace

TEST_CASE("hyperbolic form") {
  QuadForm h = hyperbolic(1);
  CHECK(h.mat(0, 1) == Rat(1, 2));
  CHECK(h.mat(1, 0) == Rat(1, 2));
  CHECK(h.mat(0, 0) == 0);
  CHECK(invariants(h) == QInvariants{2, 1, 1, 0});
  CHECK(hyperbolic(0).dim() == 0);
  QInvariants h3 = invariants(hyperbolic(3));
  CHECK(h3.dim == 6);
  CHECK(h3.signature == 0);
  // h(x,y) = xy
  CHECK(h.eval({Rat(3), Rat(5)}) == Rat(15));
}

TEST_CASE("direct sum and invariants") {
  QuadForm h = hyperbolic(1);
  QInvariants hh = invariants(direct_sum(h, h));
  CHECK(hh == QInvariants{4, 2, 2, 0});

  QuadForm unit;  // 0-dimensional
  CHECK(direct_sum(h, unit) == h);
  CHECK(direct_sum(unit, h) == h);
  CHECK(invariants(unit) == QInvariants{0, 0, 0, 0});

  QuadForm pm = direct_sum(diag({Rat(1)}), diag({Rat(-1)}));
  CHECK(pm == diag({Rat(1), Rat(-1)}));
  QInvariants i = invariants(pm);
  CHECK(i.signature == 0);
  CHECK(i.index == 1);

  CHECK(invariants(diag({Rat(1), Rat(1), Rat(-1)})) == QInvariants{3, 1, 2, 1});
}

TEST_CASE("degenerate form rejected") {
  CHECK_THROWS_WITH_AS(invariants(diag({Rat(1), Rat(0)})),
                       doctest::Contains("DegenerateForm"), Error);
}

TEST_CASE("monoid laws on random triples") {
  SplitMix64 rng(12001);
  for (int trial = 0; trial < 50; ++trial) {
    QuadForm a = random_form(rng, static_cast<int>(rng.range(0, 3)));
    QuadForm b = random_form(rng, static_cast<int>(rng.range(0, 3)));
    QuadForm c = random_form(rng, static_cast<int>(rng.range(0, 3)));
    CHECK(direct_sum(direct_sum(a, b), c) == direct_sum(a, direct_sum(b, c)));
    CHECK(direct_sum(a, QuadForm()) == a);
    CHECK(direct_sum(QuadForm(), a) == a);
  }
}

TEST_CASE("invariants additive under direct sum") {
  SplitMix64 rng(12002);
  for (int trial = 0; trial < 100; ++trial) {
    QuadForm a = random_form(rng, static_cast<int>(rng.range(1, 3)));
    QuadForm b = random_form(rng, static_cast<int>(rng.range(1, 3)));
    QInvariants ia = invariants(a), ib = invariants(b),
                is = invariants(direct_sum(a, b));
    CHECK(is.dim == ia.dim + ib.dim);
    CHECK(is.index == ia.index + ib.index);
    CHECK(is.coindex == ia.coindex + ib.coindex);
    CHECK(is.signature == ia.signature + ib.signature);
  }
}

TEST_CASE("permute") {
  QuadForm h = hyperbolic(1);
  CHECK(permute(h, {0, 1}) == h);
  CHECK(permute(h, {1, 0}) == h);  // xy is swap-symmetric
  CHECK(permute(diag({Rat(1), Rat(-1)}), {1, 0}) == diag({Rat(-1), Rat(1)}));
  CHECK_THROWS_AS(permute(h, {0, 1, 2}), Error);

  SplitMix64 rng(12003);
  for (int trial = 0; trial < 20; ++trial) {
    QuadForm q = random_form(rng, 4);
    std::vector<int> sigma{2, 0, 3, 1}, tau{1, 3, 0, 2};
    CHECK(invariants(permute(q, sigma)) == invariants(q));
    // composition: permute(permute(q,sigma),tau) = permute(q, sigma o tau)
    std::vector<int> comp(4);
    for (int i = 0; i < 4; ++i) comp[i] = sigma[tau[i]];
    CHECK(permute(permute(q, sigma), tau) == permute(q, comp));
  }
}

TEST_CASE("negate swaps index and coindex") {
  CHECK(invariants(negate(hyperbolic(1))).index == 1);
  CHECK(negate(diag({Rat(1)})) == diag({Rat(-1)}));
  SplitMix64 rng(12004);
  for (int trial = 0; trial < 20; ++trial) {
    QuadForm q = random_form(rng, static_cast<int>(rng.range(1, 4)));
    QInvariants i = invariants(q), in = invariants(negate(q));
    CHECK(in.dim == i.dim);
    CHECK(in.index == i.coindex);
    CHECK(in.coindex == i.index);
    CHECK(in.signature == -i.signature);
    // independent eigenvalue-count oracle
    CHECK(index_by_sturm(q) == i.index);
    CHECK(index_by_sturm(negate(q)) == i.coindex);
  }
}

TEST_CASE("sturm oracle on repeated eigenvalues") {
  CHECK(index_by_sturm(direct_sum(hyperbolic(1), hyperbolic(1))) == 2);
  CHECK(index_by_sturm(diag({Rat(1), Rat(1), Rat(-1)})) == 1);
  CHECK(index_by_sturm(diag({Rat(-2), Rat(-2), Rat(-2)})) == 3);
}

TEST_CASE("homotopy to hyperbolic") {
  QuadForm h = hyperbolic(1);
  QuadForm a = direct_sum(h, negate(h));
  QuadForm b = hyperbolic(2);
  CHECK(homotopy_to_hyperbolic(a, b, Rat(0)) == a);
  CHECK(homotopy_to_hyperbolic(a, b, Rat(1)) == b);
  for (int k = 0; k <= 16; ++k) {
    QuadForm q = homotopy_to_hyperbolic(a, b, Rat(k, 16));
    CHECK(is_nondegenerate(q));
  }
}

TEST_CASE("cutoff profile shape") {
  CutoffProfile p;
  p.check();
  CHECK(p.psi(0) == 1.0);
  CHECK(p.psi(1.0) == 1.0);
  CHECK(p.psi(to_double(p.support_radius)) == 0.0);
  CHECK(p.psi(-to_double(p.support_radius) - 1) == 0.0);
  // max |psi'| = 1/2 at the midpoint of each descent
  double mid = (1.0 + to_double(p.support_radius)) / 2;
  CHECK(std::abs(p.dpsi(mid)) == doctest::Approx(0.5).epsilon(1e-12));
  for (double s = -6; s <= 6; s += 0.01) CHECK(std::abs(p.dpsi(s)) <= 0.5 + 1e-12);
}

TEST_CASE("cutoff evaluation basics") {
  CutoffProfile p;
  SplitMix64 rng(12005);
  QuadForm q = random_form(rng, 2);
  CHECK(cutoff_eval(q, p, {0.0, 0.0}) == 1.0);
  // way outside the support box
  auto box = cutoff_support_box(q, p, 1.0);
  CHECK(cutoff_eval(q, p, {box[0] + 1, box[1] + 1}) == 0.0);
}

TEST_CASE("cutoff product and permutation identities") {
  CutoffProfile p;
  SplitMix64 rng(12006);
  for (int trial = 0; trial < 10; ++trial) {
    QuadForm q1 = random_form(rng, 2), q2 = random_form(rng, 1);
    QuadForm q12 = direct_sum(q1, q2);
    for (int pt = 0; pt < 100; ++pt) {
      std::vector<double> u{rng.uniform(-8, 8), rng.uniform(-8, 8),
                            rng.uniform(-8, 8)};
      double lhs = cutoff_eval(q12, p, u);
      double rhs = cutoff_eval(q1, p, {u[0], u[1]}) * cutoff_eval(q2, p, {u[2]});
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
    // chi_{q o sigma} = chi_q o sigma
    QuadForm q3 = random_form(rng, 3);
    std::vector<int> sigma{2, 0, 1};
    QuadForm qs = permute(q3, sigma);
    for (int pt = 0; pt < 50; ++pt) {
      std::vector<double> u{rng.uniform(-6, 6), rng.uniform(-6, 6),
                            rng.uniform(-6, 6)};
      std::vector<double> su(3);
      for (int i = 0; i < 3; ++i) su[sigma[i]] = u[i];
      CHECK(std::abs(cutoff_eval(qs, p, u) - cutoff_eval(q3, p, su)) <= 1e-12);
    }
  }
}

TEST_CASE("cutoff gradient bound") {
  // ||grad chi_q|| <= ||grad q||, finite differences, on spectrally
  // normalized forms (||2A|| <= 1)
  CutoffProfile p;
  SplitMix64 rng(12007);
  const double step = 1e-6, tol = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    int n = static_cast<int>(rng.range(1, 3));
    QuadForm q = random_form(rng, n);
    for (int pt = 0; pt < 1000; ++pt) {
      std::vector<double> u(n);
      for (auto& x : u) x = rng.uniform(-10, 10);
      double g2 = 0, c2 = 0;
      std::vector<double> gq(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gq[i] += 2 * to_double(q.mat(i, j)) * u[j];
      for (int i = 0; i < n; ++i) {
        std::vector<double> up = u, dn = u;
        up[i] += step;
        dn[i] -= step;
        double d = (cutoff_eval(q, p, up) - cutoff_eval(q, p, dn)) / (2 * step);
        c2 += d * d;
        g2 += gq[i] * gq[i];
      }
      CHECK(std::sqrt(c2) <= std::sqrt(g2) + tol);
      // analytic gradient agrees with finite differences
      auto cg = cutoff_grad(q, p, u);
      double a2 = 0;
      for (double x : cg) a2 += x * x;
      CHECK(std::sqrt(a2) == doctest::Approx(std::sqrt(c2)).epsilon(1e-3));
    }
  }
}

TEST_CASE("rational parsing round trip") {
  CHECK(parse_rat("3/4") == Rat(3, 4));
  CHECK(parse_rat("-7") == Rat(-7));
  CHECK(rat_str(Rat(-22, 8)) == "-11/4");
  CHECK_THROWS_AS(parse_rat("x/y"), Error);
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
}
