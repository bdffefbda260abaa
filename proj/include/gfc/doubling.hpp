#pragma once

#include "gfc/rat.hpp"

namespace gfc {

// The bifurcation profile D: cubic w^3 - 3w on |w| <= 1, odd quintic
// junction on 1 <= |w| <= 2 with D' > 0 there, and D(w) = w beyond. C^2
// everywhere. max |D(w) - w| = 3.0489... (slightly above 3: any C^1 profile
// matching the cubic at |w| = 1 must dip below -3 before recovering).
double d_profile(double w);
double d_profile_d1(double w);
double d_profile_d2(double w);

double d_profile_minus_w(double w);
double d_profile_minus_w_d1(double w);
double d_profile_minus_w_d2(double w);

// D_t(w) = w + (1/4 + t)(D(w) - w)
double d_t(double w, double t);

// the two critical points of D_t are +-r(t), r(t) = (4/sqrt 3) sqrt(t/(1+4t))
double r_of_t(double t);
// critical values are -+ s(t), s(t) = -D_t(r(t))
double s_of_t(double t);

// max_w |D(w) - w|, the natural bound constant for D-built functions
double d_profile_bound();

}  // namespace gfc
