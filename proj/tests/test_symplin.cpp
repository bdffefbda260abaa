#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfc/symplin.hpp"
#include "gfc/symplin_impl.hpp"

using namespace gfc;

namespace {

QuadForm diag(std::vector<Rat> d) {
  RMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return QuadForm(m);
}

// independent route: intersection of column spans via a joint kernel, then
// projection to E
template <class T>
Mat<T> reduce_by_intersection(const Lagr<T>& phi) {
  const int N = phi.half_dim(), m = phi.m, n = phi.n;
  // basis of W = E x R^n: x,y free on E; u free
  Mat<T> w(2 * N, 2 * m + n);
  for (int i = 0; i < m; ++i) {
    w(i, i) = T(1);          // x_i
    w(N + i, m + i) = T(1);  // y_i
  }
  for (int j = 0; j < n; ++j) w(m + j, 2 * m + j) = T(1);  // u_j
  Mat<T> joint = hcat(phi.basis, -w);
  Mat<T> ker = kernel(joint);
  // intersection vectors, then (x, y) components
  Mat<T> red(2 * m, ker.cols());
  for (int c = 0; c < ker.cols(); ++c) {
    std::vector<T> coeff(N);
    for (int i = 0; i < N; ++i) coeff[i] = ker(i, c);
    for (int i = 0; i < m; ++i) {
      T x(0), y(0);
      for (int k = 0; k < N; ++k) {
        x += phi.basis(i, k) * coeff[k];
        y += phi.basis(N + i, k) * coeff[k];
      }
      red(i, c) = x;
      red(m + i, c) = y;
    }
  }
  return red;
}

// rational rotation from the 3-4-5 triangle, exactly symplectic in Sp(2)
RMat rational_rotation() {
  RMat t(2, 2);
  t(0, 0) = Rat(4, 5);
  t(0, 1) = Rat(-3, 5);
  t(1, 0) = Rat(3, 5);
  t(1, 1) = Rat(4, 5);
  return t;
}

}  // namespace

TEST_CASE("graph of form") {
  // q = h: transverse to R^2 and iR^2
  LagrQ g = graph_of_form(QForm<Rat>(hyperbolic(1).mat));
  check_lagrangian(g);
  LagrQ r2{0, 2, RMat(4, 2)}, ir2{0, 2, RMat(4, 2)};
  r2.basis.set_block(0, 0, RMat::identity(2));
  ir2.basis.set_block(2, 0, RMat::identity(2));
  CHECK(is_transverse(g, r2));
  CHECK(is_transverse(g, ir2));

  // unit form: zero space
  CHECK(graph_of_form(QuadForm()).basis.cols() == 0);

  // q = x^2: span {(1, 2)} in C^1, isotropic by v^T Omega v = 0
  LagrQ gx = graph_of_form(diag({Rat(1)}));
  CHECK(gx.basis(0, 0) == 1);
  CHECK(gx.basis(1, 0) == 2);
  CHECK(is_isotropic(gx));
  LagrQ r1{0, 1, RMat(2, 1)}, ir1{0, 1, RMat(2, 1)};
  r1.basis(0, 0) = 1;
  ir1.basis(1, 0) = 1;
  CHECK(is_transverse(gx, r1));
  CHECK(is_transverse(gx, ir1));
}

TEST_CASE("transversality basics") {
  LagrQ r2{0, 2, RMat(4, 2)}, ir2{0, 2, RMat(4, 2)};
  r2.basis.set_block(0, 0, RMat::identity(2));
  ir2.basis.set_block(2, 0, RMat::identity(2));
  CHECK(is_transverse(r2, ir2));
  CHECK_FALSE(is_transverse(r2, r2));
  LagrQ r1{0, 1, RMat(2, 1)};
  r1.basis(0, 0) = 1;
  CHECK_THROWS_AS(is_transverse(r2, r1), Error);
}

TEST_CASE("reduce collapses stabilizations") {
  // E = 0: reduction of any graph is the zero space
  LagrQ g = graph_of_form(diag({Rat(1), Rat(-2)}));
  LagrQ red = reduce(g);
  CHECK(red.m == 0);
  CHECK(red.basis.cols() == 0);

  // split L x graph(q) reduces to L
  SplitMix64 rng(41001);
  for (int trial = 0; trial < 10; ++trial) {
    QuadForm ql = random_form(rng, 2);  // L = graph of ql inside E, m = 2
    QuadForm qs = random_form(rng, 2);  // stabilization factor
    const int m = 2, n = 2, N = 4;
    Mat<Rat> basis(2 * N, N);
    // E-part columns: x = I, y = 2 ql
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < m; ++i) {
        if (i == c) basis(i, c) = 1;
        basis(N + i, c) = 2 * ql.mat(i, c);
      }
    // stab columns: u = I, eta = 2 qs
    for (int c = 0; c < n; ++c)
      for (int j = 0; j < n; ++j) {
        if (j == c) basis(m + j, m + c) = 1;
        basis(N + m + j, m + c) = 2 * qs.mat(j, c);
      }
    LagrQ phi{m, n, basis};
    check_lagrangian(phi);
    LagrQ red2 = reduce(phi);
    CHECK(equal_subspace(red2.basis, graph_of_form(ql).basis));
    CHECK(equal_subspace(red2.basis, reduce_by_intersection(phi)));
  }
}

TEST_CASE("stable lift reduction matches intersection oracle") {
  SplitMix64 rng(41002);
  for (int trial = 0; trial < 20; ++trial) {
    QuadForm f = random_form(rng, 3);
    StableLiftQ lift{1, 2, f};
    try {
      check_lift(lift);
    } catch (const Error&) {
      continue;  // random form happened to be non-transverse
    }
    LagrQ red = reduce(lift);
    CHECK(equal_subspace(red.basis, reduce_by_intersection(lift_lagrangian(lift))));
  }
}

TEST_CASE("fiber retraction") {
  // phi(h, v) = (h/2 + v)^2 = h^2/4 + hv + v^2 lies in the fiber over H
  // (the vanishing Schur complement is exactly the fiber condition)
  RMat a(2, 2);
  a(0, 0) = Rat(1, 4);
  a(0, 1) = Rat(1, 2);
  a(1, 0) = Rat(1, 2);
  a(1, 1) = 1;
  StableLiftQ phi{1, 1, QForm<Rat>(a)};
  check_lift(phi);
  CHECK(in_fiber_over_horizontal(phi));

  CHECK(fiber_retract(phi, Rat(1)).form == phi.form);

  StableLiftQ at0 = fiber_retract(phi, Rat(0));
  CHECK(at0.form.mat(0, 0) == 0);
  CHECK(at0.form.mat(0, 1) == 0);
  CHECK(at0.form.mat(1, 1) == 1);  // pure v^2
  CHECK(in_fiber_over_horizontal(at0));

  // equivariance (phi . q)_t = phi_t . q at t = 1/2
  QuadForm h = hyperbolic(1);
  CHECK(fiber_retract(right_mul(phi, h), Rat(1, 2)).form ==
        right_mul(fiber_retract(phi, Rat(1, 2)), h).form);

  // all t keep the reduction at H
  for (int k = 0; k <= 4; ++k)
    CHECK(in_fiber_over_horizontal(fiber_retract(phi, Rat(k, 4))));

  // not in fiber: graph over H with a genuine slope
  StableLiftQ tilted{1, 1, QForm<Rat>(RMat::identity(2))};
  CHECK_THROWS_WITH_AS(fiber_retract(tilted, Rat(0)),
                       doctest::Contains("NotInFiber"), Error);
}

TEST_CASE("s_theta identity case") {
  QForm<Rat> s = s_theta(RMat::identity(2));
  RMat expect(2, 2);
  expect(0, 1) = Rat(1, 2);
  expect(1, 0) = Rat(1, 2);
  CHECK(s.mat == expect);  // <x1, x2>

  QForm<Rat> s2 = s_theta(RMat::identity(4));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(s2.mat(i, 2 + j) == (i == j ? Rat(1, 2) : Rat(0)));
}

TEST_CASE("s_theta solves the defining identity") {
  auto residual = [](const DMat& theta, const QFormD& s) {
    const int m = theta.rows() / 2;
    DMat thi = inverse(theta);
    SplitMix64 rng(41003);
    double worst = 0;
    for (int pt = 0; pt < 10; ++pt) {
      std::vector<double> x(2 * m);
      for (auto& v : x) v = rng.uniform(-2, 2);
      auto grad = s.grad(x);
      // lhs: theta^{-1} applied to (x1, dS/dx1)
      std::vector<double> in(2 * m), lhs(2 * m, 0.0);
      for (int i = 0; i < m; ++i) {
        in[i] = x[i];
        in[m + i] = grad[i];
      }
      for (int i = 0; i < 2 * m; ++i)
        for (int j = 0; j < 2 * m; ++j) lhs[i] += thi(i, j) * in[j];
      for (int i = 0; i < m; ++i) {
        worst = std::max(worst, std::abs(lhs[i] - grad[m + i]));
        worst = std::max(worst, std::abs(lhs[m + i] - x[m + i]));
      }
    }
    return worst;
  };

  // small rotation
  double al = 0.07;
  DMat rot = DMat::identity(2);
  rot(0, 0) = std::cos(al);
  rot(0, 1) = -std::sin(al);
  rot(1, 0) = std::sin(al);
  rot(1, 1) = std::cos(al);
  CHECK(residual(rot, s_theta(rot)) < 1e-10);

  // symplectic scaling (x, y) -> (l x, y / l)
  DMat sc(2, 2);
  sc(0, 0) = 1.25;
  sc(1, 1) = 0.8;
  CHECK(residual(sc, s_theta(sc)) < 1e-10);

  // rotation by pi/2 is not graphical (delta block singular)
  DMat quarter(2, 2);
  quarter(0, 1) = -1;
  quarter(1, 0) = 1;
  CHECK_THROWS_WITH_AS(s_theta(quarter), doctest::Contains("NotGraphical"),
                       Error);
}

TEST_CASE("lift_step at the identity is left h^m stabilization") {
  SplitMix64 rng(41004);
  for (int trial = 0; trial < 10; ++trial) {
    QuadForm f = random_form(rng, 3);
    StableLiftQ phi{1, 2, QForm<Rat>(f.mat)};
    try {
      check_lift(phi);
    } catch (const Error&) {
      continue;
    }
    StableLiftQ stepped = lift_step(phi, RMat::identity(2));
    StableLiftQ expected = left_mul(QForm<Rat>(hyperbolic(1).mat), phi);
    CHECK(stepped.n == phi.n + 2);
    CHECK(stepped.form.mat == expected.form.mat);
  }
}

TEST_CASE("lift_step tracks the reduction and is equivariant") {
  // double case: small rotation, phi = graph data of x^2 in m = 1
  DMat a(1, 1);
  a(0, 0) = 1.0;
  StableLiftD phi{1, 0, QFormD(a)};
  double al = 0.09;
  DMat rot = DMat::identity(2);
  rot(0, 0) = std::cos(al);
  rot(0, 1) = -std::sin(al);
  rot(1, 0) = std::sin(al);
  rot(1, 1) = std::cos(al);
  StableLiftD stepped = lift_step(phi, rot);
  CHECK(stepped.n == 2);
  DMat red = reduce(stepped).basis;
  DMat expect = rot * reduce(phi).basis;
  CHECK(principal_angle_max(red, expect) < 1e-8);

  // exact case: rational rotation, equivariance with q = h
  RMat rrot = rational_rotation();
  SplitMix64 rng(41005);
  QuadForm f = random_form(rng, 2);
  StableLiftQ phiq{1, 1, QForm<Rat>(f.mat)};
  check_lift(phiq);
  QForm<Rat> h(hyperbolic(1).mat);
  StableLiftQ lhs = lift_step(right_mul(phiq, h), rrot);
  StableLiftQ rhs = right_mul(lift_step(phiq, rrot), h);
  CHECK(lhs.form.mat == rhs.form.mat);
  // reduction tracking, exact arithmetic
  CHECK(equal_subspace(reduce(lhs).basis, rrot * reduce(phiq).basis));
}

TEST_CASE("lift_path") {
  DMat a(1, 1);
  a(0, 0) = 0.5;
  StableLiftD phi{1, 0, QFormD(a)};

  // constant identity path with K = 1
  SymplPath idpath;
  idpath.m = 1;
  idpath.samples = {DMat::identity(2), DMat::identity(2)};
  auto lifts = lift_path(phi, idpath);
  REQUIRE(lifts.size() == 1);
  StableLiftD expect = left_mul(hyperbolic_d(1), phi);
  CHECK((lifts[0].form.mat - expect.form.mat).max_abs() < 1e-14);

  // moderate rotation in doubles: entries stay bounded, reduction tracks
  SymplPath rotp = make_rotation_path(1, 0.8, 8);
  auto rl = lift_path(phi, rotp);
  REQUIRE(rl.size() == 8);
  for (size_t k = 0; k < rl.size(); ++k) {
    CHECK(rl[k].n == static_cast<int>(2 * (k + 1)));  // stab grows by 2m
    DMat red = reduce(rl[k]).basis;
    DMat target = rotp.samples[k + 1] * reduce(phi).basis;
    CHECK(principal_angle_max(red, target) < 1e-6);
  }

  // equivariance through the whole path
  QFormD h = hyperbolic_d(1);
  auto left = lift_path(right_mul(phi, h), rotp);
  auto right = lift_path(phi, rotp);
  for (size_t k = 0; k < left.size(); ++k)
    CHECK((left[k].form.mat - right_mul(right[k], h).form.mat).max_abs() <
          1e-12);

  // too coarse: K = 2 for a pi rotation exceeds the near-identity radius
  SymplPath coarse = make_rotation_path(1, M_PI, 2);
  CHECK_THROWS_WITH_AS(lift_path(phi, coarse), doctest::Contains("StepTooLarge"),
                       Error);
}

TEST_CASE("exact lifting of a near-pi rotation at K = 8") {
  // The composed lift squares its coefficients at each factor, so the
  // near-pi rotation runs in exact rationals; the reduction then tracks the
  // rotating line exactly, and in particular within any floating tolerance.
  RMat a(1, 1);
  a(0, 0) = Rat(1, 2);
  StableLiftQ phi{1, 0, QForm<Rat>(a)};
  auto samples = make_rational_rotation_path(1, 8);
  auto lifts = lift_path_exact(phi, samples);
  REQUIRE(lifts.size() == 8);
  for (size_t k = 0; k < lifts.size(); ++k) {
    CHECK(lifts[k].n == static_cast<int>(2 * (k + 1)));
    CHECK(equal_subspace(reduce(lifts[k]).basis,
                         samples[k + 1] * reduce(phi).basis));
  }
  // right-Q-equivariance, exact
  QForm<Rat> h(hyperbolic(1).mat);
  auto lhs = lift_path_exact(right_mul(phi, h), samples);
  auto rhs = lift_path_exact(phi, samples);
  for (size_t k = 0; k < lhs.size(); ++k)
    CHECK(lhs[k].form.mat == right_mul(rhs[k], h).form.mat);
}

TEST_CASE("p_action symplectic and reduction invariant") {
  SplitMix64 rng(41006);
  // A = (0, id) acts trivially
  PElement<Rat> triv{RMat(2, 1), RMat::identity(2)};
  CHECK(p_action_matrix(triv, 1) == RMat::identity(6));

  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 50; ++trial) {
    PElement<Rat> p;
    int m = 1, M = 2;
    p.a = RMat(M, m);
    p.b = RMat(M, M);
    for (int i = 0; i < M; ++i) {
      p.a(i, 0) = rng.rat(3, 2);
      for (int j = 0; j < M; ++j) p.b(i, j) = rng.rat(3, 2);
    }
    if (det(p.b) == 0) continue;
    ++checked;
    RMat act = p_action_matrix(p, m);
    RMat omega = omega_matrix<Rat>(m + M);
    CHECK(act.transpose() * omega * act == omega);

    // group law
    PElement<Rat> p2;
    p2.a = RMat(M, m);
    p2.b = RMat::identity(M);
    p2.a(0, 0) = rng.rat(3, 2);
    RMat lhs = p_action_matrix(p, m) * p_action_matrix(p2, m);
    PElement<Rat> prod;
    // [[I,0],[a,b]] [[I,0],[a2,b2]] = [[I,0],[a + b a2, b b2]]
    prod.a = p.a + p.b * p2.a;
    prod.b = p.b * p2.b;
    CHECK(lhs == p_action_matrix(prod, m));
  }
  CHECK(checked == 50);

  // rho(A(phi)) = rho(phi) on random transverse lifts
  int done = 0;
  for (int trial = 0; trial < 40 && done < 20; ++trial) {
    QuadForm f = random_form(rng, 3);
    StableLiftQ lift{1, 2, QForm<Rat>(f.mat)};
    try {
      check_lift(lift);
    } catch (const Error&) {
      continue;
    }
    PElement<Rat> p;
    p.a = RMat(2, 1);
    p.b = RMat::identity(2);
    p.a(0, 0) = rng.rat(2, 2);
    p.a(1, 0) = rng.rat(2, 2);
    p.b(0, 1) = rng.rat(2, 2);
    LagrQ moved = p_action(p, lift_lagrangian(lift));
    check_lagrangian(moved);
    CHECK(equal_subspace(reduce(moved).basis, reduce(lift).basis));
    ++done;
  }
  CHECK(done == 20);

  PElement<Rat> sing{RMat(1, 1), RMat(1, 1)};
  CHECK_THROWS_WITH_AS(p_action_matrix(sing, 1), doctest::Contains("SingularB"),
                       Error);
}

TEST_CASE("compatibility normalization") {
  // m = 1, k = 1, one extra stabilization; u_phi = (1, 0, 1)
  RMat a(3, 3);
  a(0, 2) = 1;
  a(2, 0) = 1;
  a(1, 1) = 1;
  a(2, 2) = -1;
  StableLiftQ phi{1, 2, QForm<Rat>(a)};
  check_lift(phi);
  RMat u = u_phi(phi);
  CHECK(u.col(0) == std::vector<Rat>{1, 0, 1});

  RMat pi_block = RMat::identity(1);
  RMat v_block(1, 1);
  v_block(0, 0) = 1;
  auto res = compatibility_normalize({phi}, pi_block, v_block);
  RMat u2 = u_phi(res.lifts[0]) * pi_block;
  CHECK(u2.col(0) == std::vector<Rat>{1, 1, 0});

  // already compatible: u = dpsi = (1, 0, 0) gives the identity action
  RMat c(3, 3);
  c(0, 0) = 3;
  c(1, 1) = 1;
  c(2, 2) = -1;
  StableLiftQ comp{1, 2, QForm<Rat>(c)};
  check_lift(comp);
  CHECK(u_phi(comp).col(0) == std::vector<Rat>{1, 0, 0});
  auto res2 = compatibility_normalize({comp}, pi_block, RMat(1, 1));
  CHECK(res2.block_actions[0] == RMat::identity(3));
  CHECK(res2.lifts[0].form.mat == comp.form.mat);

  // nesting: phi_j = phi_i + q gives A_j = A_i x id
  QuadForm q = diag({Rat(2), Rat(-1)});
  StableLiftQ phij = right_mul(phi, QForm<Rat>(q.mat));
  auto resi = compatibility_normalize({phi}, pi_block, v_block);
  auto resj = compatibility_normalize({phij}, pi_block, v_block);
  RMat expected = block_diag(resi.block_actions[0], RMat::identity(2));
  CHECK(resj.block_actions[0] == expected);
}
