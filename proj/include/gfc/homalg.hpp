#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gfc/matrix.hpp"

namespace gfc {

using IMat = Mat<BigInt>;

struct SmithNF {
  IMat u, d, v;  // u*m*v = d, u and v unimodular, d diagonal with
                 // non-negative entries in a divisibility chain
  std::vector<BigInt> factors() const;  // nonzero diagonal entries
  int rank() const;
};

SmithNF smith_normal_form(const IMat& m);

// Test oracle: invariant factors via gcds of k x k minors, independent of the
// elimination route. Exponential in size; small matrices only.
std::vector<BigInt> invariant_factors_by_minors(const IMat& m);

// Finitely generated graded abelian group: per degree a free rank plus
// torsion coefficients in a divisibility chain (each > 1, each dividing the
// next).
struct GradedAbGroup {
  struct Piece {
    int free = 0;
    std::vector<BigInt> torsion;
    bool operator==(const Piece&) const = default;
    bool trivial() const { return free == 0 && torsion.empty(); }
  };
  std::map<int, Piece> deg;

  static GradedAbGroup z(int d, int rank = 1);        // Z^rank in degree d
  static GradedAbGroup cyclic(const BigInt& n, int d);  // Z/n in degree d

  void add_free(int d, int rank);
  void add_torsion(int d, const BigInt& n);  // n > 1 after normalization
  void normalize();                          // divisibility chains, drop 0s

  bool operator==(const GradedAbGroup&) const = default;
  bool trivial() const { return deg.empty(); }
  // Z concentrated in a single degree (rank one, no torsion)?
  std::optional<int> concentrated_free_rank_one() const;
  std::string str() const;

  GradedAbGroup shift(int by) const;
  // dim_Fp via universal coefficients: free + p-torsion here and one below
  int dim_mod_p(int degree, const BigInt& p) const;
};

// Chain complex of free Z-modules: ranks[k] = rank C_k, d[k]: C_k -> C_{k-1}
// for k >= 1 (d[0] unused/empty).
struct ChainComplexZ {
  std::vector<int> ranks;
  std::vector<IMat> d;

  void check() const;  // shapes and d.d = 0 ("NotAComplex")
};

GradedAbGroup homology(const ChainComplexZ& c);

// degreewise (A (x) B) + Tor(A,B) shifted by one, Tor(Z/m,Z/n) = Z/gcd(m,n)
GradedAbGroup derived_tensor(const GradedAbGroup& a, const GradedAbGroup& b);

// Returns d with A = Z[d] iff (A (x)^L B) (x)^L Z/p = Z/p concentrated in a
// single degree for every given prime; none otherwise. The prime list must
// contain one coprime to all torsion present (the hypothesis the detection
// argument consumes); violating that raises PrimesInsufficient.
std::optional<int> detect_rank_one(const GradedAbGroup& a,
                                   const GradedAbGroup& b,
                                   const std::vector<BigInt>& primes);

}  // namespace gfc
