#include "gfc/cutoff.hpp"

#include <cmath>

namespace gfc {

namespace {
// quintic smoothstep 6t^5 - 15t^4 + 10t^3 on [0,1]
double smooth(double t) { return ((6 * t - 15) * t + 10) * t * t * t; }
double dsmooth(double t) { return 30 * t * t * (1 - t) * (1 - t); }
double d2smooth(double t) { return 60 * t * (1 - t) * (1 - 2 * t); }
}  // namespace

void CutoffProfile::check() const {
  require(one_radius > 0 && support_radius > 0, "SchemaError",
          "cutoff radii must be positive");
  require(support_radius - one_radius >= 2, "SchemaError",
          "cutoff descent width must be >= 2");
}

double CutoffProfile::psi(double s) const {
  double a = to_double(one_radius), b = to_double(support_radius);
  s = std::abs(s);
  if (s <= a) return 1.0;
  if (s >= b) return 0.0;
  return 1.0 - smooth((s - a) / (b - a));
}

double CutoffProfile::dpsi(double s) const {
  double a = to_double(one_radius), b = to_double(support_radius);
  double m = std::abs(s);
  if (m <= a || m >= b) return 0.0;
  double d = -dsmooth((m - a) / (b - a)) / (b - a);
  return s > 0 ? d : -d;
}

double CutoffProfile::d2psi(double s) const {
  double a = to_double(one_radius), b = to_double(support_radius);
  double m = std::abs(s);
  if (m <= a || m >= b) return 0.0;
  return -d2smooth((m - a) / (b - a)) / ((b - a) * (b - a));
}

double cutoff_eval(const QuadForm& q, const CutoffProfile& p,
                   const std::vector<double>& u) {
  const int n = q.dim();
  require(static_cast<int>(u.size()) == n, "SchemaError",
          "cutoff_eval: point dimension mismatch");
  double out = 1.0;
  for (int j = 0; j < n; ++j) {
    double zj = 0;
    for (int k = 0; k < n; ++k) zj += 2 * to_double(q.mat(j, k)) * u[k];
    out *= p.psi(zj);
    if (out == 0) return 0;
  }
  return out;
}

std::vector<double> cutoff_grad(const QuadForm& q, const CutoffProfile& p,
                                const std::vector<double>& u) {
  const int n = q.dim();
  std::vector<double> z(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) z[j] += 2 * to_double(q.mat(j, k)) * u[k];
  std::vector<double> psis(n), grad_psi_n(n);
  for (int j = 0; j < n; ++j) psis[j] = p.psi(z[j]);
  for (int j = 0; j < n; ++j) {
    double g = p.dpsi(z[j]);
    for (int k = 0; k < n; ++k)
      if (k != j) g *= psis[k];
    grad_psi_n[j] = g;
  }
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i] += 2 * to_double(q.mat(j, i)) * grad_psi_n[j];
  return out;
}

std::vector<double> cutoff_support_box(const QuadForm& q,
                                       const CutoffProfile& p, double b) {
  const int n = q.dim();
  if (n == 0) return {};
  RMat inv = inverse(q.mat * Rat(2));
  double rs = to_double(p.support_radius);
  std::vector<double> box(n, 0.0);
  for (int i = 0; i < n; ++i) {
    Rat row(0);
    for (int j = 0; j < n; ++j) row += abs(inv(i, j));
    box[i] = to_double(row) * rs * std::max(b, 0.0);
  }
  return box;
}

}  // namespace gfc
