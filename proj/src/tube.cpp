#include "gfc/tube.hpp"

#include <cmath>

namespace gfc {

CubicalField build_sublevel_field(const LinFn& f, double x, double w_floor,
                                  double w_ceil, int grid_points) {
  const int axes = 1 + f.n;
  int np = grid_points;
  if (np == 0) np = axes <= 2 ? 257 : 129;
  std::vector<int> npts(axes, np);
  std::vector<double> lo(axes), hi(axes);
  lo[0] = w_floor;
  hi[0] = w_ceil;
  for (int i = 0; i < f.n; ++i) {
    lo[1 + i] = f.v_box[i].first * 1.05 - 0.25;
    hi[1 + i] = f.v_box[i].second * 1.05 + 0.25;
  }
  auto field = CubicalField::sample(npts, lo, hi, [&](const std::vector<double>& p) {
    std::vector<double> v(p.begin() + 1, p.end());
    return f.eval(x, p[0], v);
  });
  // certify: epsilon vanishes on the boundary shell
  double worst = 0;
  const int kShellSamples = 64;
  for (int axis = 0; axis < axes; ++axis) {
    for (int side = 0; side < 2; ++side) {
      for (int s = 0; s < kShellSamples; ++s) {
        std::vector<double> p(axes);
        for (int i = 0; i < axes; ++i)
          p[i] = lo[i] + (hi[i] - lo[i]) * ((s * (i + 3) * 7919) % 97) / 96.0;
        p[axis] = side ? hi[axis] : lo[axis];
        std::vector<double> v(p.begin() + 1, p.end());
        worst = std::max(worst, std::abs(f.eval_eps(x, p[0], v)));
      }
    }
  }
  require(worst <= 1e-9, "BoxNotCertified",
          "epsilon does not vanish near the box boundary (sampled " +
              std::to_string(worst) + ")");
  field.boundary_certified = true;
  return field;
}

TubeResult tube_check(const LinFn& f, double x, int grid_points) {
  auto crit = critical_points(f, x);
  double vmax = 0;
  for (const CritPoint& c : crit) {
    require(std::abs(c.value) > 1e-6, "ZeroNotRegular",
            "a critical value sits at zero within 1e-6");
    vmax = std::max(vmax, std::abs(c.value));
  }
  TubeResult out;
  out.threshold = vmax + 2;
  const double floor0 = -(out.threshold + 2);
  const double ceil0 = std::max(2.0, f.w_hi + 1);

  // thresholds must clear the samples; wiggle the box a little on collision
  for (int attempt = 0;; ++attempt) {
    double shift = attempt * 3e-4 * (ceil0 - floor0);
    try {
      CubicalField field =
          build_sublevel_field(f, x, floor0 - shift, ceil0 + shift, grid_points);
      CubicalCore core = cubical_reduce(field, 1e-4, -out.threshold);
      out.homology = homology_of_core(core);
      out.dims_f2 = core_dims_mod_p(core, 2);
      out.dims_f3 = core_dims_mod_p(core, 3);
      break;
    } catch (const Error& e) {
      if (e.code() == "ThresholdTooClose" && attempt < 4) continue;
      throw;
    }
  }
  out.crosschecks_ok = true;
  for (auto& [deg, dim] : out.dims_f2)
    out.crosschecks_ok &= dim == out.homology.dim_mod_p(deg, 2);
  for (auto& [deg, dim] : out.dims_f3)
    out.crosschecks_ok &= dim == out.homology.dim_mod_p(deg, 3);
  for (const auto& [deg, piece] : out.homology.deg) {
    out.crosschecks_ok &= out.homology.dim_mod_p(deg, 2) ==
                          (out.dims_f2.count(deg) ? out.dims_f2[deg] : 0);
    out.crosschecks_ok &= out.homology.dim_mod_p(deg, 3) ==
                          (out.dims_f3.count(deg) ? out.dims_f3[deg] : 0);
  }
  out.degree = out.homology.concentrated_free_rank_one();
  return out;
}

}  // namespace gfc
