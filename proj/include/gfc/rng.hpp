#pragma once

#include <cstdint>

#include "gfc/rat.hpp"

namespace gfc {

// splitmix64. Test vectors (seed 0): e220a8397b1dcdaf, 6e789e6aa1b965f4,
// 06c45d188009454f. All randomized suites draw from this generator so that
// a scenario seed pins every report byte.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [lo, hi] inclusive
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

  // rational with numerator in [-num_max, num_max], denominator in [1, den_max]
  Rat rat(int64_t num_max, int64_t den_max) {
    return Rat(range(-num_max, num_max), range(1, den_max));
  }

  Rat nonzero_rat(int64_t num_max, int64_t den_max) {
    for (;;) {
      Rat r = rat(num_max, den_max);
      if (r != 0) return r;
    }
  }

 private:
  uint64_t state_;
};

}  // namespace gfc
