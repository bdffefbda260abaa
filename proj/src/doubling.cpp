#include "gfc/doubling.hpp"

#include <cmath>

namespace gfc {

namespace {
// junction polynomial on s = w - 1 in [0, 1]: matches the cubic's value and
// two derivatives at s = 0 and vanishes to second order at s = 1
double junction(double s) {
  return -3 + s * (-1 + s * (3 + s * (27 + s * (-44 + s * 18))));
}
double djunction(double s) {
  return -1 + s * (6 + s * (81 + s * (-176 + s * 90)));
}
double d2junction(double s) {
  return 6 + s * (162 + s * (-528 + s * 360));
}
}  // namespace

double d_profile_minus_w(double w) {
  double a = std::abs(w);
  double m;
  if (a <= 1)
    m = a * a * a - 4 * a;
  else if (a < 2)
    m = junction(a - 1);
  else
    m = 0;
  return w >= 0 ? m : -m;
}

double d_profile_minus_w_d1(double w) {
  double a = std::abs(w);
  if (a <= 1) return 3 * a * a - 4;
  if (a < 2) return djunction(a - 1);
  return 0;
}

double d_profile_minus_w_d2(double w) {
  double a = std::abs(w);
  double m;
  if (a <= 1)
    m = 6 * a;
  else if (a < 2)
    m = d2junction(a - 1);
  else
    m = 0;
  return w >= 0 ? m : -m;
}

double d_profile(double w) { return w + d_profile_minus_w(w); }
double d_profile_d1(double w) { return 1 + d_profile_minus_w_d1(w); }
double d_profile_d2(double w) { return d_profile_minus_w_d2(w); }

double d_t(double w, double t) {
  return w + (0.25 + t) * d_profile_minus_w(w);
}

double r_of_t(double t) {
  return 4.0 / std::sqrt(3.0) * std::sqrt(t / (1 + 4 * t));
}

double s_of_t(double t) { return -d_t(r_of_t(t), t); }

double d_profile_bound() {
  // max of |w^3 - 4w| extended by the junction dip; sampled once, cached
  static const double bound = [] {
    double m = 0;
    for (int i = 0; i <= 20000; ++i) {
      double w = 2.0 * i / 20000;
      m = std::max(m, std::abs(d_profile_minus_w(w)));
    }
    return m;
  }();
  return bound;
}

}  // namespace gfc
