#include "gfc/quadform.hpp"

#include <algorithm>
#include <sstream>

namespace gfc {

Rat parse_rat(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
    require(q != 0, "ParseError", "zero denominator in '" + s + "'");
    return Rat(p, q);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    raise("ParseError", "bad rational '" + s + "'");
  }
}

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

RMat to_rational(const DMat& d) {
  RMat r(d.rows(), d.cols());
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j) {
      // exact binary expansion of the double
      double x = d(i, j);
      BigInt den = 1;
      while (x != std::floor(x) && den < BigInt(1) << 60) {
        x *= 2;
        den <<= 1;
      }
      r(i, j) = Rat(BigInt(static_cast<long long>(x)), den);
    }
  return r;
}

DMat to_dmat(const RMat& r) {
  DMat d(r.rows(), r.cols());
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) d(i, j) = to_double(r(i, j));
  return d;
}

QuadForm hyperbolic(int k) {
  RMat m(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    m(2 * i, 2 * i + 1) = Rat(1, 2);
    m(2 * i + 1, 2 * i) = Rat(1, 2);
  }
  return QuadForm(m);
}

QFormD hyperbolic_d(int k) {
  DMat m(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    m(2 * i, 2 * i + 1) = 0.5;
    m(2 * i + 1, 2 * i) = 0.5;
  }
  return QFormD(m);
}

bool is_symmetric(const QuadForm& q) {
  for (int i = 0; i < q.dim(); ++i)
    for (int j = i + 1; j < q.dim(); ++j)
      if (q.mat(i, j) != q.mat(j, i)) return false;
  return true;
}

bool is_nondegenerate(const QuadForm& q) {
  return q.dim() == 0 || det(q.mat) != 0;
}

void check_quadform(const QuadForm& q) {
  require(q.mat.rows() == q.mat.cols(), "SchemaError", "form matrix not square");
  require(is_symmetric(q), "SchemaError", "form matrix not symmetric");
  require(is_nondegenerate(q), "DegenerateForm", "det(mat) = 0");
}

QInvariants invariants(const QuadForm& q) {
  check_quadform(q);
  const int n = q.dim();
  RMat a = q.mat;
  QInvariants inv;
  inv.dim = n;
  for (int k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      // bring a nonzero entry to the diagonal: first nonzero diagonal below,
      // else first off-diagonal pair (ordered scan), via e_i <- e_i + e_j
      int d = -1;
      for (int i = k; i < n; ++i)
        if (a(i, i) != 0) {
          d = i;
          break;
        }
      if (d >= 0) {
        if (d != k) {
          for (int j = 0; j < n; ++j) std::swap(a(k, j), a(d, j));
          for (int i = 0; i < n; ++i) std::swap(a(i, k), a(i, d));
        }
      } else {
        int pi = -1, pj = -1;
        for (int i = k; i < n && pi < 0; ++i)
          for (int j = i + 1; j < n; ++j)
            if (a(i, j) != 0) {
              pi = i;
              pj = j;
              break;
            }
        require(pi >= 0, "DegenerateForm", "trailing block vanishes");
        for (int j = 0; j < n; ++j) a(pi, j) += a(pj, j);
        for (int i = 0; i < n; ++i) a(i, pi) += a(i, pj);
        if (pi != k) {
          for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pi, j));
          for (int i = 0; i < n; ++i) std::swap(a(i, k), a(i, pi));
        }
      }
    }
    Rat d = a(k, k);
    if (d > 0)
      ++inv.coindex;
    else
      ++inv.index;
    for (int i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat f = a(i, k) / d;
      for (int j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
      for (int j = 0; j < n; ++j) a(j, i) -= f * a(j, k);
    }
  }
  inv.signature = inv.coindex - inv.index;
  return inv;
}

QuadForm permute(const QuadForm& q, const std::vector<int>& sigma) {
  const int n = q.dim();
  require(static_cast<int>(sigma.size()) == n, "SchemaError",
          "permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int s : sigma) {
    require(s >= 0 && s < n && !seen[s], "SchemaError", "not a permutation");
    seen[s] = true;
  }
  RMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = q.mat(sigma[i], sigma[j]);
  return QuadForm(m);
}

QuadForm homotopy_to_hyperbolic(const QuadForm& a, const QuadForm& b,
                                const Rat& t) {
  require(a.dim() == b.dim(), "SchemaError", "dimension mismatch");
  Rat c = (1 - t * t) / (1 + t * t);
  Rat s = 2 * t / (1 + t * t);
  QuadForm out(a.mat * c + b.mat * s);
  require(is_nondegenerate(out), "DegenerateForm",
          "interpolant singular at t=" + rat_str(t));
  return out;
}

namespace {

using Poly = std::vector<Rat>;  // coefficients, ascending degree

int degree(const Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

Poly trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

Poly derivative(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<int>(i)));
  return trim(d);
}

Poly rem(Poly a, const Poly& b) {
  int db = degree(b);
  for (int da = degree(a); da >= db && da >= 0; da = degree(a)) {
    Rat f = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
    a[da] = 0;
  }
  return trim(a);
}

Poly quot(Poly a, const Poly& b) {
  int db = degree(b);
  Poly q(std::max(0, degree(a) - db + 1), Rat(0));
  for (int da = degree(a); da >= db && da >= 0; da = degree(a)) {
    Rat f = a[da] / b[db];
    q[da - db] = f;
    for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
    a[da] = 0;
  }
  return trim(q);
}

Poly poly_gcd(Poly a, Poly b) {
  a = trim(a);
  b = trim(b);
  while (degree(b) >= 0) {
    Poly r = rem(a, b);
    a = b;
    b = r;
  }
  if (degree(a) >= 0) {
    Rat lead = a[degree(a)];
    for (auto& c : a) c /= lead;
  }
  return a;
}

int sign_at_zero(const Poly& p) {
  for (const Rat& c : p) {
    if (c > 0) return 1;
    if (c < 0) return -1;
  }
  return 0;
}

int sign_at_minus_inf(const Poly& p) {
  int d = degree(p);
  if (d < 0) return 0;
  int s = p[d] > 0 ? 1 : -1;
  return (d % 2 == 0) ? s : -s;
}

// distinct roots of square-free p in (-inf, 0) by Sturm's theorem
int sturm_negative_roots(const Poly& p) {
  std::vector<Poly> chain{trim(p), derivative(p)};
  while (degree(chain.back()) > 0) {
    Poly r = rem(chain[chain.size() - 2], chain.back());
    if (degree(r) < 0) break;
    for (auto& c : r) c = -c;
    chain.push_back(r);
  }
  auto variations = [&](auto sign_of) {
    int v = 0, last = 0;
    for (const Poly& q : chain) {
      int s = sign_of(q);
      if (s == 0) continue;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  };
  int v_inf = variations([](const Poly& q) { return sign_at_minus_inf(q); });
  int v_zero = variations([](const Poly& q) { return sign_at_zero(q); });
  return v_inf - v_zero;
}

// characteristic polynomial det(xI - A) by Faddeev-LeVerrier
Poly char_poly(const RMat& a) {
  const int n = a.rows();
  Poly c(n + 1, Rat(0));
  c[n] = 1;
  RMat m = RMat::identity(n);
  for (int k = 1; k <= n; ++k) {
    m = a * m;
    Rat tr(0);
    for (int i = 0; i < n; ++i) tr += m(i, i);
    Rat ck = -tr / Rat(k);
    c[n - k] = ck;
    for (int i = 0; i < n; ++i) m(i, i) += ck;
  }
  return c;
}

}  // namespace

int index_by_sturm(const QuadForm& q) {
  if (q.dim() == 0) return 0;
  Poly p = char_poly(q.mat);
  // split off multiplicities: count roots of each square-free layer
  int count = 0;
  Poly cur = trim(p);
  while (degree(cur) > 0) {
    Poly g = poly_gcd(cur, derivative(cur));
    Poly sqfree = quot(cur, g);  // distinct roots of cur
    count += sturm_negative_roots(sqfree);
    cur = g;  // roots of multiplicity >= 2, shifted down one level
  }
  return count;
}

QuadForm random_form(SplitMix64& rng, int n) {
  for (;;) {
    RMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Rat v(rng.range(-8, 8), 8);
        a(i, j) = v;
        a(j, i) = v;
      }
    QuadForm q(a);
    if (!is_nondegenerate(q)) continue;
    // normalize ||2A||_inf <= 1 so the cut-off gradient bound applies
    Rat row_max(0);
    for (int i = 0; i < n; ++i) {
      Rat s(0);
      for (int j = 0; j < n; ++j) s += abs(Rat(2) * a(i, j));
      row_max = std::max(row_max, s);
    }
    if (row_max > 1) {
      BigInt scale = numerator(row_max) / denominator(row_max) + 1;
      q.mat = q.mat * Rat(1, scale);
    }
    return q;
  }
}

}  // namespace gfc
