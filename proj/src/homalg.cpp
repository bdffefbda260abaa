#include "gfc/homalg.hpp"

#include <algorithm>
#include <sstream>

namespace gfc {

namespace {

BigInt bgcd(BigInt a, BigInt b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void swap_rows(IMat& m, int a, int b) {
  for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IMat& m, int a, int b) {
  for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
void add_row(IMat& m, int dst, int src, const BigInt& f) {
  for (int j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}
void add_col(IMat& m, int dst, int src, const BigInt& f) {
  for (int i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}
void neg_row(IMat& m, int r) {
  for (int j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

std::vector<BigInt> SmithNF::factors() const {
  std::vector<BigInt> f;
  for (int i = 0; i < std::min(d.rows(), d.cols()); ++i)
    if (d(i, i) != 0) f.push_back(d(i, i));
  return f;
}

int SmithNF::rank() const { return static_cast<int>(factors().size()); }

SmithNF smith_normal_form(const IMat& m) {
  const int r = m.rows(), c = m.cols();
  SmithNF s{IMat::identity(r), m, IMat::identity(c)};
  IMat& d = s.d;
  const int n = std::min(r, c);
  for (int t = 0; t < n; ++t) {
    // pivot: smallest nonzero magnitude in the trailing block
    int pi = -1, pj = -1;
    BigInt best = 0;
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j) {
        if (d(i, j) == 0) continue;
        BigInt a = abs(d(i, j));
        if (pi < 0 || a < best) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    if (pi != t) {
      swap_rows(d, t, pi);
      swap_rows(s.u, t, pi);
    }
    if (pj != t) {
      swap_cols(d, t, pj);
      swap_cols(s.v, t, pj);
    }
    for (;;) {
      bool clean = true;
      for (int i = t + 1; i < r; ++i) {
        if (d(i, t) == 0) continue;
        BigInt q = d(i, t) / d(t, t);
        add_row(d, i, t, -q);
        add_row(s.u, i, t, -q);
        if (d(i, t) != 0) {  // remainder is smaller than the pivot: promote
          swap_rows(d, t, i);
          swap_rows(s.u, t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < c; ++j) {
        if (d(t, j) == 0) continue;
        BigInt q = d(t, j) / d(t, t);
        add_col(d, j, t, -q);
        add_col(s.v, j, t, -q);
        if (d(t, j) != 0) {
          swap_cols(d, t, j);
          swap_cols(s.v, t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      bool col_zero = true, row_zero = true;
      for (int i = t + 1; i < r; ++i) col_zero &= (d(i, t) == 0);
      for (int j = t + 1; j < c; ++j) row_zero &= (d(t, j) == 0);
      if (!col_zero || !row_zero) continue;
      // divisibility: pivot must divide the whole trailing block
      int bi = -1;
      for (int i = t + 1; i < r && bi < 0; ++i)
        for (int j = t + 1; j < c; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bi = i;
            break;
          }
      if (bi < 0) break;
      add_row(d, t, bi, 1);
      add_row(s.u, t, bi, 1);
    }
    if (d(t, t) < 0) {
      neg_row(d, t);
      neg_row(s.u, t);
    }
  }
  return s;
}

std::vector<BigInt> invariant_factors_by_minors(const IMat& m) {
  const int r = m.rows(), c = m.cols();
  const int n = std::min(r, c);
  std::vector<BigInt> dk(n + 1, 0);
  dk[0] = 1;
  for (int k = 1; k <= n; ++k) {
    BigInt g = 0;
    std::vector<int> ri(k), ci(k);
    for (int i = 0; i < k; ++i) ri[i] = i;
    for (;;) {
      for (int i = 0; i < k; ++i) ci[i] = i;
      for (;;) {
        RMat sub(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = Rat(m(ri[i], ci[j]));
        g = bgcd(g, numerator(det(sub)));
        int p = k - 1;
        while (p >= 0 && ci[p] == c - k + p) --p;
        if (p < 0) break;
        ++ci[p];
        for (int q = p + 1; q < k; ++q) ci[q] = ci[q - 1] + 1;
      }
      int p = k - 1;
      while (p >= 0 && ri[p] == r - k + p) --p;
      if (p < 0) break;
      ++ri[p];
      for (int q = p + 1; q < k; ++q) ri[q] = ri[q - 1] + 1;
    }
    dk[k] = g;
    if (g == 0) break;
  }
  std::vector<BigInt> f;
  for (int k = 1; k <= n; ++k) {
    if (dk[k] == 0) break;
    f.push_back(dk[k] / dk[k - 1]);
  }
  return f;
}

GradedAbGroup GradedAbGroup::z(int d, int rank) {
  GradedAbGroup g;
  g.add_free(d, rank);
  g.normalize();
  return g;
}

GradedAbGroup GradedAbGroup::cyclic(const BigInt& n, int d) {
  GradedAbGroup g;
  g.add_torsion(d, n);
  g.normalize();
  return g;
}

void GradedAbGroup::add_free(int d, int rank) {
  if (rank != 0) deg[d].free += rank;
}
void GradedAbGroup::add_torsion(int d, const BigInt& n) {
  if (n > 1) deg[d].torsion.push_back(n);
}

namespace {
std::map<BigInt, std::vector<int>> prime_power_split(
    const std::vector<BigInt>& coeffs) {
  std::map<BigInt, std::vector<int>> by_prime;
  for (BigInt n : coeffs) {
    for (BigInt p = 2; p * p <= n; ++p) {
      if (n % p != 0) continue;
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      by_prime[p].push_back(e);
    }
    if (n > 1) by_prime[n].push_back(1);
  }
  return by_prime;
}
}  // namespace

void GradedAbGroup::normalize() {
  for (auto it = deg.begin(); it != deg.end();) {
    Piece& pc = it->second;
    if (!pc.torsion.empty()) {
      auto by_prime = prime_power_split(pc.torsion);
      size_t layers = 0;
      for (auto& [p, es] : by_prime) {
        std::sort(es.begin(), es.end(), std::greater<int>());
        layers = std::max(layers, es.size());
      }
      std::vector<BigInt> chain(layers, 1);
      for (auto& [p, es] : by_prime)
        for (size_t i = 0; i < es.size(); ++i) {
          BigInt pw = 1;
          for (int e = 0; e < es[i]; ++e) pw *= p;
          chain[layers - 1 - i] *= pw;  // largest powers go last
        }
      pc.torsion.clear();
      for (const BigInt& c : chain)
        if (c > 1) pc.torsion.push_back(c);
    }
    if (pc.trivial())
      it = deg.erase(it);
    else
      ++it;
  }
}

std::optional<int> GradedAbGroup::concentrated_free_rank_one() const {
  if (deg.size() != 1) return std::nullopt;
  const auto& [d, pc] = *deg.begin();
  if (pc.free == 1 && pc.torsion.empty()) return d;
  return std::nullopt;
}

std::string GradedAbGroup::str() const {
  if (deg.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, pc] : deg) {
    if (!first) os << ", ";
    first = false;
    os << "deg " << d << ": ";
    bool plus = false;
    if (pc.free > 0) {
      os << "Z";
      if (pc.free > 1) os << "^" << pc.free;
      plus = true;
    }
    for (const auto& t : pc.torsion) {
      if (plus) os << "+";
      os << "Z/" << t;
      plus = true;
    }
  }
  return os.str();
}

GradedAbGroup GradedAbGroup::shift(int by) const {
  GradedAbGroup g;
  for (const auto& [d, pc] : deg) g.deg[d + by] = pc;
  return g;
}

int GradedAbGroup::dim_mod_p(int degree, const BigInt& p) const {
  auto count = [&](int d) {
    auto it = deg.find(d);
    if (it == deg.end()) return std::pair<int, int>{0, 0};
    int tor = 0;
    for (const auto& t : it->second.torsion)
      if (t % p == 0) ++tor;
    return std::pair<int, int>{it->second.free, tor};
  };
  auto [f, t] = count(degree);
  auto [f1, t1] = count(degree - 1);
  (void)f1;
  return f + t + t1;
}

void ChainComplexZ::check() const {
  require(ranks.size() == d.size(), "SchemaError",
          "chain complex: ranks/boundaries length mismatch");
  for (size_t k = 1; k < ranks.size(); ++k) {
    require(d[k].rows() == ranks[k - 1] && d[k].cols() == ranks[k],
            "SchemaError", "chain complex: boundary shape mismatch");
    if (k + 1 < ranks.size()) {
      IMat sq = d[k] * d[k + 1];
      require(sq.is_zero(), "NotAComplex",
              "boundary squared nonzero into degree " + std::to_string(k - 1));
    }
  }
}

GradedAbGroup homology(const ChainComplexZ& c) {
  c.check();
  const int top = static_cast<int>(c.ranks.size()) - 1;
  GradedAbGroup h;
  std::vector<SmithNF> snf(top + 1);
  std::vector<int> bd_rank(top + 2, 0);
  for (int k = 1; k <= top; ++k) {
    snf[k] = smith_normal_form(c.d[k]);
    bd_rank[k] = snf[k].rank();
  }
  for (int k = 0; k <= top; ++k) {
    int cycles = c.ranks[k] - (k >= 1 ? bd_rank[k] : 0);
    int boundaries = (k + 1 <= top) ? bd_rank[k + 1] : 0;
    h.add_free(k, cycles - boundaries);
    if (k + 1 <= top)
      for (const BigInt& f : snf[k + 1].factors()) h.add_torsion(k, f);
  }
  h.normalize();
  return h;
}

GradedAbGroup derived_tensor(const GradedAbGroup& a, const GradedAbGroup& b) {
  GradedAbGroup out;
  for (const auto& [da, pa] : a.deg)
    for (const auto& [db, pb] : b.deg) {
      const int d = da + db;
      out.add_free(d, pa.free * pb.free);
      for (const auto& t : pb.torsion)
        for (int i = 0; i < pa.free; ++i) out.add_torsion(d, t);
      for (const auto& t : pa.torsion)
        for (int i = 0; i < pb.free; ++i) out.add_torsion(d, t);
      for (const auto& s : pa.torsion)
        for (const auto& t : pb.torsion) {
          BigInt g = bgcd(s, t);
          out.add_torsion(d, g);      // tensor part
          out.add_torsion(d + 1, g);  // Tor part, shifted by one
        }
    }
  out.normalize();
  return out;
}

std::optional<int> detect_rank_one(const GradedAbGroup& a,
                                   const GradedAbGroup& b,
                                   const std::vector<BigInt>& primes) {
  require(!primes.empty(), "PrimesInsufficient", "prime list empty");
  std::vector<BigInt> torsion;
  for (const auto* g : {&a, &b})
    for (const auto& [d, pc] : g->deg)
      for (const auto& t : pc.torsion) torsion.push_back(t);
  // a usable prime either annihilates all torsion present or is coprime to it
  bool has_usable = false;
  for (const BigInt& p : primes) {
    bool annihilates = true, coprime = true;
    for (const auto& t : torsion) {
      if (t != p) annihilates = false;
      if (t % p == 0) coprime = false;
    }
    if (annihilates || coprime) has_usable = true;
  }
  require(has_usable, "PrimesInsufficient",
          "no listed prime annihilates or avoids the torsion present");

  GradedAbGroup ab = derived_tensor(a, b);
  for (const BigInt& p : primes) {
    GradedAbGroup t = derived_tensor(ab, GradedAbGroup::cyclic(p, 0));
    if (t.deg.size() != 1) return std::nullopt;
    const auto& pc = t.deg.begin()->second;
    if (pc.free != 0 || pc.torsion.size() != 1 || pc.torsion[0] != p)
      return std::nullopt;
  }
  // criterion passed: the decomposition argument forces A = Z[d]
  auto d = a.concentrated_free_rank_one();
  require(d.has_value(), "PrimesInsufficient",
          "criterion passed on the given primes but A is not free of rank "
          "one; the prime list misses its torsion");
  return d;
}

}  // namespace gfc
