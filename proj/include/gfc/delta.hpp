#pragma once

#include "gfc/critical.hpp"
#include "gfc/homalg.hpp"

namespace gfc {

// Difference-function data: F(x, w, w', v_1, v'_1, ..., v_n, v'_n) =
// w - w' + G + eps(x, w, v) - eps'(x, w', v') with interleaved fiber
// coordinates. `full` is the assembled expression over fiber slots
// z = (w, w', v_1, v'_1, ...) stored as v-slots 0 .. 2n+1.
struct DeltaFn {
  BaseDesc base;
  int n = 0;     // number of v-pairs
  Expr full;     // complete expression in (x, z)
  Expr g_part;   // G in the interleaved v-slots (z_2 ..)
  Expr eps, eps_prime;  // originals in (x, w, v) slots of the source
  double w_lo = -2, w_hi = 2;
  std::vector<std::pair<double, double>> v_box;  // per v_i (primed same)
  Expr bound;
  bool b_declared = false;
  double feature_scale = 1.0;

  int fiber_dim() const { return 2 + 2 * n; }
  double eval(double x, const std::vector<double>& z) const;
  Jet2 fiber_jet(double x, const std::vector<double>& z) const;
};

// delta f(x, v, v') = f(x, v) - f(x, v'), interleaved
DeltaFn difference(const LinFn& f);

// the 2n-dimensional interleaved form q(v) - q(v')
QuadForm delta_form(const QuadForm& q);

// F (+)^delta_b Q: Q on even dimension 2m, cut-off factors evaluated on the
// unprimed / primed halves of the new coordinates
DeltaFn oplus_b_delta(const DeltaFn& f, const QuadForm& q);
DeltaFn oplus_b_delta(const DeltaFn& f, const QuadForm& q, const Expr& b,
                      bool b_is_declared);

std::vector<CritPoint> critical_points_delta(const DeltaFn& f, double x);

struct DiffHomologyReport {
  struct PerPrime {
    long p = 0;
    std::map<int, int> dims_delta;  // H(delta f <= -2c, <= -inf)
    std::map<int, int> dims_low;    // H(f <= 0, <= -inf)
    std::map<int, int> dims_plus;   // H(f <= 2c, f <= 0)
    bool pass = false;
  };
  std::vector<PerPrime> primes;
  double c = 0;
  bool all_pass() const {
    for (const auto& p : primes)
      if (!p.pass) return false;
    return !primes.empty();
  }
};

// Verifies dim H(delta f <= -2c) = dim H(f <= 0) * dim H_+(f) over each F_p;
// requires the critical values of f(x, .) to lie in (-2c,-c) u (c,2c).
DiffHomologyReport difference_homology_check(const LinFn& f, double x,
                                             const Rat& c,
                                             const std::vector<long>& primes,
                                             int grid_points = 0);

}  // namespace gfc
