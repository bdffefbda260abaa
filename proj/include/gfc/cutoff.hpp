#pragma once

#include <vector>

#include "gfc/quadform.hpp"

namespace gfc {

// Profile of the one-variable cut-off psi: identically 1 on |s| <= one_radius,
// 0 on |s| >= support_radius, C^2 quintic smoothstep in between. With the
// default radii (1, 19/4) the descent width is 15/4 and max|psi'| = 1/2,
// attained at a single point per side.
struct CutoffProfile {
  Rat one_radius = 1;
  Rat support_radius = Rat(19, 4);

  double psi(double s) const;
  double dpsi(double s) const;
  double d2psi(double s) const;

  void check() const;  // invariants: radii positive, width >= 2
};

// chi_q(u) = prod_j psi((grad q (u))_j)
double cutoff_eval(const QuadForm& q, const CutoffProfile& p,
                   const std::vector<double>& u);

// Gradient of chi_q at u (2A^T * grad psi_n(2Au)); used by tests.
std::vector<double> cutoff_grad(const QuadForm& q, const CutoffProfile& p,
                                const std::vector<double>& u);

// Half-width box containing supp(chi_q(u/b)): |u_j| <= radius[j] outside.
// Computed from the support radius and the inverse gradient map.
std::vector<double> cutoff_support_box(const QuadForm& q,
                                       const CutoffProfile& p, double b);

}  // namespace gfc
