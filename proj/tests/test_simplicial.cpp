#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfc/simpset.hpp"

using namespace gfc;

namespace {

DirectedCover cover_on(CellComplex base,
                       const std::vector<std::vector<int>>& max_cells) {
  DirectedCover c;
  c.base = std::move(base);
  for (const auto& mc : max_cells) c.regions.push_back(c.base.open_region(mc));
  c.set_total_order();
  return c;
}

GradedAbGroup mv_homology(const DirectedCover& cover) {
  return homology(mv_blowup(cover).chains());
}

// the standard 7-vertex triangulated torus
CellComplex torus_complex() {
  // triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7
  std::vector<std::vector<int>> tris;
  for (int i = 0; i < 7; ++i) {
    tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
    tris.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return CellComplex::simplicial(7, tris);
}

}  // namespace

TEST_CASE("monoids and actions") {
  DiscreteMonoid z2 = DiscreteMonoid::cyclic(2);
  z2.check();
  DiscreteMonoid rt = DiscreteMonoid::right_trivial3();
  rt.check();
  CHECK(rt.mul(1, 2) == 2);
  CHECK(rt.mul(2, 0) == 2);

  RightModule::regular(z2).check(z2);
  RightModule::point(rt).check(rt);

  RightModule bad = RightModule::point(z2);
  bad.act[0][1] = 0;
  bad.act[0][0] = 0;
  bad.check(z2);  // point action is fine either way
  RightModule bad2 = RightModule::regular(z2);
  bad2.act[0][1] = 0;
  CHECK_THROWS_WITH_AS(bad2.check(z2), doctest::Contains("NotAnAction"), Error);
}

TEST_CASE("bar complex levels and identities") {
  DiscreteMonoid triv = DiscreteMonoid::trivial();
  BarComplex bt = bar(RightModule::point(triv), triv, 4);
  for (int n = 0; n <= 4; ++n) CHECK(bt.level_size(n) == 1);

  DiscreteMonoid z2 = DiscreteMonoid::cyclic(2);
  BarComplex bz2 = bar(RightModule::point(z2), z2, 4);
  CHECK(bz2.level_size(0) == 1);
  CHECK(bz2.level_size(1) == 2);
  CHECK(bz2.level_size(2) == 4);
  CHECK(bz2.level_size(3) == 8);
  CHECK(bz2.level_size(4) == 16);

  BarComplex bqq = bar(RightModule::regular(z2), z2, 4);
  for (int n = 0; n <= 4; ++n)
    CHECK(bqq.level_size(n) == 2 << n);  // Q^{n+1}
}

TEST_CASE("classifying space homology of small groups") {
  DiscreteMonoid z2 = DiscreteMonoid::cyclic(2);
  GradedAbGroup h = bar_homology(bar(RightModule::point(z2), z2, 5));
  // H_*(BZ/2; Z) = Z, Z/2, 0, Z/2, 0 ...; over F_2 every dim is 1
  CHECK(h.deg.at(0).free == 1);
  for (int k = 0; k <= 4; ++k) CHECK(h.dim_mod_p(k, 2) == 1);
  CHECK(h.dim_mod_p(1, 3) == 0);

  DiscreteMonoid z3 = DiscreteMonoid::cyclic(3);
  GradedAbGroup h3 = bar_homology(bar(RightModule::point(z3), z3, 5));
  for (int k = 0; k <= 4; ++k) {
    CHECK(h3.dim_mod_p(k, 3) == 1);
    CHECK(h3.dim_mod_p(k, 2) == (k == 0 ? 1 : 0));
  }

  // B(Q,Q) is contractible through the explicit simplicial homotopy
  GradedAbGroup hqq = bar_homology(bar(RightModule::regular(z2), z2, 5));
  CHECK(hqq.deg.at(0).free == 1);
  for (int k = 1; k <= 4; ++k) CHECK(hqq.dim_mod_p(k, 2) == 0);

  GradedAbGroup hpt = bar_homology(bar(RightModule::point(DiscreteMonoid::trivial()),
                                        DiscreteMonoid::trivial(), 5));
  CHECK(hpt == GradedAbGroup::z(0));
}

TEST_CASE("bqq contraction relations") {
  for (auto monoid : {DiscreteMonoid::trivial(), DiscreteMonoid::cyclic(2),
                      DiscreteMonoid::cyclic(3), DiscreteMonoid::right_trivial3()}) {
    BqqReport r = bqq_contraction_check(monoid, 4);
    CHECK(r.pass());
    CHECK(r.checked > 0);
  }
  // corrupting h (dropping the product) breaks d_{n+1} h_n = id with a
  // concrete witness
  BqqReport bad = bqq_contraction_check_impl(DiscreteMonoid::cyclic(2), 3, true);
  CHECK_FALSE(bad.pass());
  bool witnessed = false;
  for (auto& f : bad.failures) witnessed |= f.relation == "d_{n+1} h_n = id";
  CHECK(witnessed);
}

TEST_CASE("mv blow-up computes the base homology") {
  // single-set cover of a point-like base
  DirectedCover pt = cover_on(CellComplex::simplicial(2, {{0, 1}}), {{2}});
  CHECK(mv_homology(pt) == GradedAbGroup::z(0));

  // interval by two overlapping arcs
  CellComplex seg4 = CellComplex::interval(4);
  int e = 5;
  DirectedCover ival =
      cover_on(seg4, {{e + 0, e + 1, e + 2}, {e + 1, e + 2, e + 3}});
  CHECK(mv_homology(ival) == GradedAbGroup::z(0));
  CHECK(mv_homology(ival) == cell_homology(seg4));

  // interval by four regions
  CellComplex seg6 = CellComplex::interval(6);
  int e6 = 7;
  DirectedCover ival4 = cover_on(
      seg6, {{e6 + 0, e6 + 1}, {e6 + 1, e6 + 2, e6 + 3}, {e6 + 3, e6 + 4},
             {e6 + 4, e6 + 5}});
  CHECK(mv_homology(ival4) == GradedAbGroup::z(0));

  // circle by three arcs
  CellComplex circ = CellComplex::circle(6);
  int ce = 6;
  DirectedCover carc = cover_on(circ, {{ce + 5, ce + 0, ce + 1},
                                       {ce + 1, ce + 2, ce + 3},
                                       {ce + 3, ce + 4, ce + 5}});
  GradedAbGroup hcirc = mv_homology(carc);
  CHECK(hcirc == cell_homology(circ));
  CHECK(hcirc.deg.at(1).free == 1);

  // circle by two arcs: overlaps have two components, the nerve is a theta
  DirectedCover carc2 = cover_on(circ, {{ce + 5, ce + 0, ce + 1, ce + 2},
                                        {ce + 2, ce + 3, ce + 4, ce + 5}});
  CHECK(mv_homology(carc2) == cell_homology(circ));

  // torus-like 2-complex covered by its vertex stars
  CellComplex torus = torus_complex();
  GradedAbGroup htor = cell_homology(torus);
  CHECK(htor.deg.at(0).free == 1);
  CHECK(htor.deg.at(1).free == 2);
  CHECK(htor.deg.at(2).free == 1);
  DirectedCover stars = star_cover(torus);
  CHECK(mv_homology(stars) == htor);
}

TEST_CASE("star covers") {
  CellComplex tri = CellComplex::simplicial(3, {{0, 1, 2}});
  DirectedCover stars = star_cover(tri);
  CHECK(stars.count() == 3);
  // total intersection is the interior simplex set: just the triangle
  auto inter = intersect(intersect(stars.regions[0], stars.regions[1]),
                         stars.regions[2]);
  int count = 0, tri_cell = -1;
  for (int c = 0; c < tri.size(); ++c)
    if (inter[c]) {
      ++count;
      tri_cell = c;
    }
  CHECK(count == 1);
  CHECK(tri.dim[tri_cell] == 2);

  // two disjoint vertices: two disjoint stars
  CellComplex two = CellComplex::simplicial(2, {{0}, {1}});
  DirectedCover st2 = star_cover(two);
  CHECK_FALSE(any_of(intersect(st2.regions[0], st2.regions[1])));

  // boundary of the triangle: pairwise overlaps, empty triple
  CellComplex bdry = CellComplex::simplicial(3, {{0, 1}, {0, 2}, {1, 2}});
  DirectedCover st3 = star_cover(bdry);
  CHECK(any_of(intersect(st3.regions[0], st3.regions[1])));
  CHECK_FALSE(any_of(intersect(intersect(st3.regions[0], st3.regions[1]),
                               st3.regions[2])));
  CHECK(mv_homology(st3) == cell_homology(bdry));
}

TEST_CASE("simplicial maps to the classifying space") {
  DiscreteMonoid z2 = DiscreteMonoid::cyclic(2);

  // all edges to the unit: always valid
  CellComplex tri = CellComplex::simplicial(3, {{0, 1, 2}});
  std::map<int, int> unit_labels;
  for (int c = 0; c < tri.size(); ++c)
    if (tri.dim[c] == 1) unit_labels[c] = 0;
  auto res = mv_simplicial_map(tri, z2, unit_labels);
  CHECK(res.valid);

  // circle with labels multiplying to a non-unit around the cycle: no
  // 2-simplices, no constraints
  CellComplex bdry = CellComplex::simplicial(3, {{0, 1}, {0, 2}, {1, 2}});
  std::map<int, int> odd_labels;
  for (int c = 0; c < bdry.size(); ++c)
    if (bdry.dim[c] == 1) odd_labels[c] = (c % 2 == 0) ? 1 : 0;
  CHECK(mv_simplicial_map(bdry, z2, odd_labels).valid);

  // filled triangle with non-multiplicative labels: obstruction at the face
  std::map<int, int> bad_labels;
  for (int c = 0; c < tri.size(); ++c)
    if (tri.dim[c] == 1) bad_labels[c] = 1;
  auto bad = mv_simplicial_map(tri, z2, bad_labels);
  CHECK_FALSE(bad.valid);
  CHECK(tri.dim[bad.failing_triangle] == 2);
}
