#include "gfc/symplin.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "gfc/symplin_impl.hpp"

namespace gfc {

namespace {
Eigen::MatrixXd to_eigen(const DMat& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}
}  // namespace

double op_norm(const DMat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return to_eigen(m).jacobiSvd().singularValues()(0);
}

double min_singular_value(const DMat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  auto sv = to_eigen(m).jacobiSvd().singularValues();
  return sv(sv.size() - 1);
}

double max_singular_value(const DMat& m) { return op_norm(m); }

double principal_angle_max(const DMat& a, const DMat& b) {
  if (a.cols() != b.cols() || a.rows() != b.rows()) return M_PI / 2;
  if (a.cols() == 0) return 0;
  Eigen::MatrixXd ea = to_eigen(a), eb = to_eigen(b);
  Eigen::HouseholderQR<Eigen::MatrixXd> qa(ea), qb(eb);
  Eigen::MatrixXd q1 =
      qa.householderQ() * Eigen::MatrixXd::Identity(ea.rows(), ea.cols());
  Eigen::MatrixXd q2 =
      qb.householderQ() * Eigen::MatrixXd::Identity(eb.rows(), eb.cols());
  // sin of the largest principal angle = spectral norm of the projector
  // difference; stable near zero where acos of a singular value is not
  Eigen::MatrixXd diff = q1 * q1.transpose() - q2 * q2.transpose();
  double s = diff.jacobiSvd().singularValues()(0);
  return std::asin(std::clamp(s, 0.0, 1.0));
}

void SymplPath::check() const {
  require(!samples.empty(), "SchemaError", "path has no samples");
  const int d = samples[0].rows();
  require(d == 2 * m && samples[0].cols() == d, "SchemaError",
          "path samples must be 2m x 2m");
  DMat id = DMat::identity(d);
  require((samples[0] - id).max_abs() <= 1e-10, "SchemaError",
          "path must start at the identity");
  DMat omega = omega_matrix<double>(m);
  for (const DMat& s : samples) {
    require(s.rows() == d && s.cols() == d, "SchemaError",
            "inconsistent sample shapes");
    DMat residual = s.transpose() * omega * s - omega;
    require(residual.max_abs() <= 1e-10 * std::max(1.0, s.max_abs()),
            "SchemaError", "sample is not symplectic");
  }
  for (size_t k = 1; k < samples.size(); ++k) {
    DMat factor = samples[k] * inverse(samples[k - 1]);
    require(op_norm(factor - id) < near_identity_radius, "StepTooLarge",
            "consecutive samples too far apart; resample the path");
  }
}

std::vector<StableLiftD> lift_path(const StableLiftD& phi0,
                                   const SymplPath& path) {
  path.check();
  require(phi0.m == path.m, "SchemaError", "lift/path dimension mismatch");
  std::vector<StableLiftD> out;
  StableLiftD cur = phi0;
  for (size_t k = 1; k < path.samples.size(); ++k) {
    DMat factor = path.samples[k] * inverse(path.samples[k - 1]);
    try {
      cur = lift_step(cur, factor);
    } catch (const Error& e) {
      if (e.code() == "NotGraphical")
        raise("StepTooLarge",
              "a path factor left the graphical regime; resample");
      throw;
    }
    out.push_back(cur);
  }
  return out;
}

std::vector<StableLiftQ> lift_path_exact(const StableLiftQ& phi0,
                                         const std::vector<RMat>& samples,
                                         double near_identity_radius) {
  require(samples.size() >= 2, "SchemaError", "path needs >= 2 samples");
  const int m = phi0.m;
  require(samples[0] == RMat::identity(2 * m), "SchemaError",
          "path must start at the identity");
  RMat omega = omega_matrix<Rat>(m);
  for (const RMat& s : samples)
    require(s.transpose() * omega * s == omega, "SchemaError",
            "sample is not symplectic");
  std::vector<StableLiftQ> out;
  StableLiftQ cur = phi0;
  for (size_t k = 1; k < samples.size(); ++k) {
    RMat factor = samples[k] * inverse(samples[k - 1]);
    require(op_norm(to_dmat(factor) - DMat::identity(2 * m)) <
                near_identity_radius,
            "StepTooLarge", "consecutive samples too far apart; resample");
    try {
      cur = lift_step(cur, factor);
    } catch (const Error& e) {
      if (e.code() == "NotGraphical")
        raise("StepTooLarge",
              "a path factor left the graphical regime; resample");
      throw;
    }
    out.push_back(cur);
  }
  return out;
}

std::vector<RMat> make_rational_rotation_path(int m, int K) {
  RMat step = RMat::identity(2 * m);
  step(0, 0) = Rat(12, 13);
  step(0, m) = Rat(-5, 13);
  step(m, 0) = Rat(5, 13);
  step(m, m) = Rat(12, 13);
  std::vector<RMat> samples{RMat::identity(2 * m)};
  for (int k = 1; k <= K; ++k) samples.push_back(step * samples.back());
  return samples;
}

SymplPath make_rotation_path(int m, double angle, int K) {
  SymplPath p;
  p.m = m;
  for (int k = 0; k <= K; ++k) {
    double t = angle * k / K;
    DMat s = DMat::identity(2 * m);
    s(0, 0) = std::cos(t);
    s(0, m) = -std::sin(t);
    s(m, 0) = std::sin(t);
    s(m, m) = std::cos(t);
    p.samples.push_back(s);
  }
  return p;
}

// explicit instantiations keep the template bodies out of every TU
template bool is_isotropic<Rat>(const Lagr<Rat>&, double);
template bool is_isotropic<double>(const Lagr<double>&, double);
template void check_lagrangian<Rat>(const Lagr<Rat>&);
template void check_lagrangian<double>(const Lagr<double>&);
template Lagr<Rat> graph_of_form<Rat>(const QForm<Rat>&);
template Lagr<double> graph_of_form<double>(const QForm<double>&);
template bool is_transverse<Rat>(const Lagr<Rat>&, const Lagr<Rat>&);
template bool is_transverse<double>(const Lagr<double>&, const Lagr<double>&);
template bool equal_subspace<Rat>(const Mat<Rat>&, const Mat<Rat>&);
template bool equal_subspace<double>(const Mat<double>&, const Mat<double>&);
template Lagr<Rat> reduce<Rat>(const Lagr<Rat>&);
template Lagr<double> reduce<double>(const Lagr<double>&);
template void check_lift<Rat>(const StableLift<Rat>&);
template void check_lift<double>(const StableLift<double>&);
template Lagr<Rat> lift_lagrangian<Rat>(const StableLift<Rat>&);
template Lagr<double> lift_lagrangian<double>(const StableLift<double>&);
template StableLift<Rat> left_mul<Rat>(const QForm<Rat>&, const StableLift<Rat>&);
template StableLift<double> left_mul<double>(const QForm<double>&,
                                             const StableLift<double>&);
template StableLift<Rat> right_mul<Rat>(const StableLift<Rat>&, const QForm<Rat>&);
template StableLift<double> right_mul<double>(const StableLift<double>&,
                                              const QForm<double>&);
template Lagr<Rat> horizontal<Rat>(int);
template Lagr<double> horizontal<double>(int);
template bool in_fiber_over_horizontal<Rat>(const StableLift<Rat>&);
template bool in_fiber_over_horizontal<double>(const StableLift<double>&);
template StableLift<Rat> fiber_retract<Rat>(const StableLift<Rat>&, const Rat&);
template StableLift<double> fiber_retract<double>(const StableLift<double>&,
                                                  const double&);
template QForm<Rat> s_theta<Rat>(const Mat<Rat>&);
template QForm<double> s_theta<double>(const Mat<double>&);
template StableLift<Rat> lift_step<Rat>(const StableLift<Rat>&, const Mat<Rat>&);
template StableLift<double> lift_step<double>(const StableLift<double>&,
                                              const Mat<double>&);
template Mat<Rat> p_action_matrix<Rat>(const PElement<Rat>&, int);
template Mat<double> p_action_matrix<double>(const PElement<double>&, int);
template Lagr<Rat> p_action<Rat>(const PElement<Rat>&, const Lagr<Rat>&);
template Lagr<double> p_action<double>(const PElement<double>&,
                                       const Lagr<double>&);
template Mat<Rat> u_phi<Rat>(const StableLift<Rat>&);
template Mat<double> u_phi<double>(const StableLift<double>&);
template CompatResult<Rat> compatibility_normalize<Rat>(
    const std::vector<StableLift<Rat>>&, const Mat<Rat>&, const Mat<Rat>&);
template CompatResult<double> compatibility_normalize<double>(
    const std::vector<StableLift<double>>&, const Mat<double>&,
    const Mat<double>&);

}  // namespace gfc
