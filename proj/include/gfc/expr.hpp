#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "gfc/cutoff.hpp"
#include "gfc/quadform.hpp"

namespace gfc {

// Slot encoding for variables: 0 = x (base chart), 1 = w, 2+i = v_i.
constexpr int kSlotX = 0;
constexpr int kSlotW = 1;
constexpr int slot_v(int i) { return 2 + i; }

// Order-2 forward jet over a set of active slots. Inline storage: the
// fiber dimensions in play never exceed kMaxJet, and Newton loops are hot.
struct Jet2 {
  static constexpr int kMaxJet = 8;
  double v = 0;
  int nn = 0;
  std::array<double, kMaxJet> g{};
  std::array<double, kMaxJet * kMaxJet> h{};
  explicit Jet2(int n = 0) : nn(n) {}
  int n() const { return nn; }
  double& hess(int i, int j) { return h[static_cast<size_t>(i) * nn + j]; }
  double hess(int i, int j) const { return h[static_cast<size_t>(i) * nn + j]; }
};

// Immutable expression tree: rational constants, variables, + - * /,
// pow(int), and two fixed profiles (the cut-off psi and D(w) - w).
// chi-of-quadratic-form nodes keep the cut-off factors of the modified sum
// exact and safe at b = 0.
class Expr {
 public:
  Expr();  // the zero expression

  static Expr constant(const Rat& r);
  static Expr var(int slot);
  static Expr x() { return var(kSlotX); }
  static Expr w() { return var(kSlotW); }
  static Expr v(int i) { return var(slot_v(i)); }

  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  Expr operator-() const;

  static Expr pow(const Expr& base, int exponent);  // exponent >= 0
  static Expr psi(const Expr& arg);                 // default CutoffProfile
  static Expr dmw(const Expr& arg);                 // D(arg) - arg

  // chi_q(u / b) with u read from the given slots; entry -1 denotes a
  // literal zero coordinate (used by the delta-variant); evaluates to 0
  // whenever b <= 0
  static Expr chi(const QuadForm& q, const Expr& b, std::vector<int> u_slots);

  // quadratic form q evaluated on variables at the given slots
  static Expr form(const QuadForm& q, const std::vector<int>& slots);

  bool is_zero() const;

  // replace each variable slot s by slot_map[s] (identity if out of range)
  Expr reindex(const std::vector<int>& slot_map) const;

  double eval(const std::vector<double>& values) const;
  // jet over active slots; values indexed by slot
  Jet2 jet(const std::vector<double>& values,
           const std::vector<int>& active) const;

  std::string str() const;
  // parseable JSON text (the input grammar); internal chi nodes serialize
  // as a marker the parser rejects, so only input-grammar trees round-trip
  std::string json_text() const;

  struct Node;
  std::shared_ptr<const Node> node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node(std::move(n)) {}
};

// grammar: rationals ("3/2"), numbers, {"var":"x"|"w"|"v3"|"u2"},
// {"op":"+"|"-"|"*"|"/"|"neg", "args":[...]}, {"op":"pow","base":e,"exp":k},
// {"op":"psi"|"dmw","arg":e}
Expr parse_expr_json(const std::string& json_text);

}  // namespace gfc
