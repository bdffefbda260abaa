#include "gfc/expr.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "gfc/doubling.hpp"

namespace gfc {

enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kNeg, kPow, kPsi, kDmw, kChi };

struct Expr::Node {
  Op op;
  Rat value;             // kConst
  int slot = -1;         // kVar
  int exponent = 0;      // kPow
  std::vector<Expr> args;
  // kChi payload
  DMat two_a;                // 2A of the form
  std::vector<int> u_slots;  // -1 entries read as literal zero
  CutoffProfile profile;
};

namespace {

std::shared_ptr<const Expr::Node> make_node(Expr::Node n) {
  return std::make_shared<const Expr::Node>(std::move(n));
}

// ---- jet arithmetic ----

Jet2 jet_const(double v, int n) {
  Jet2 j(n);
  j.v = v;
  return j;
}

Jet2 jet_add(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r.v += b.v;
  const int n = r.nn;
  for (int i = 0; i < n; ++i) r.g[i] += b.g[i];
  for (int i = 0; i < n * n; ++i) r.h[i] += b.h[i];
  return r;
}

Jet2 jet_sub(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r.v -= b.v;
  const int n = r.nn;
  for (int i = 0; i < n; ++i) r.g[i] -= b.g[i];
  for (int i = 0; i < n * n; ++i) r.h[i] -= b.h[i];
  return r;
}

Jet2 jet_neg(const Jet2& a) {
  Jet2 r = a;
  r.v = -r.v;
  const int n = r.nn;
  for (int i = 0; i < n; ++i) r.g[i] = -r.g[i];
  for (int i = 0; i < n * n; ++i) r.h[i] = -r.h[i];
  return r;
}

Jet2 jet_mul(const Jet2& a, const Jet2& b) {
  const int n = a.n();
  Jet2 r(n);
  r.v = a.v * b.v;
  for (int i = 0; i < n; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.hess(i, j) = a.v * b.hess(i, j) + b.v * a.hess(i, j) +
                     a.g[i] * b.g[j] + a.g[j] * b.g[i];
  return r;
}

// composition with a scalar function given by value and two derivatives
Jet2 jet_compose(const Jet2& u, double f, double df, double d2f) {
  const int n = u.n();
  Jet2 r(n);
  r.v = f;
  for (int i = 0; i < n; ++i) r.g[i] = df * u.g[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.hess(i, j) = df * u.hess(i, j) + d2f * u.g[i] * u.g[j];
  return r;
}

Jet2 jet_inv(const Jet2& a) {
  double iv = 1.0 / a.v;
  return jet_compose(a, iv, -iv * iv, 2 * iv * iv * iv);
}

Jet2 jet_pow(const Jet2& a, int k) {
  if (k == 0) return jet_const(1.0, a.n());
  if (k == 1) return a;
  double p2 = std::pow(a.v, k - 2);
  double p1 = p2 * a.v;
  double p0 = p1 * a.v;
  return jet_compose(a, p0, k * p1, static_cast<double>(k) * (k - 1) * p2);
}

}  // namespace

Expr::Expr() : node(make_node({Op::kConst, Rat(0)})) {}

Expr Expr::constant(const Rat& r) {
  Expr::Node n{Op::kConst, r};
  return Expr(make_node(std::move(n)));
}

Expr Expr::var(int slot) {
  Expr::Node n{Op::kVar, Rat(0)};
  n.slot = slot;
  return Expr(make_node(std::move(n)));
}

bool Expr::is_zero() const {
  return node->op == Op::kConst && node->value == 0;
}

Expr Expr::operator+(const Expr& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  Node n{Op::kAdd, Rat(0)};
  n.args = {*this, o};
  return Expr(make_node(std::move(n)));
}

Expr Expr::operator-(const Expr& o) const {
  if (o.is_zero()) return *this;
  Node n{Op::kSub, Rat(0)};
  n.args = {*this, o};
  return Expr(make_node(std::move(n)));
}

Expr Expr::operator*(const Expr& o) const {
  if (is_zero() || o.is_zero()) return Expr();
  Node n{Op::kMul, Rat(0)};
  n.args = {*this, o};
  return Expr(make_node(std::move(n)));
}

Expr Expr::operator/(const Expr& o) const {
  Node n{Op::kDiv, Rat(0)};
  n.args = {*this, o};
  return Expr(make_node(std::move(n)));
}

Expr Expr::operator-() const {
  Node n{Op::kNeg, Rat(0)};
  n.args = {*this};
  return Expr(make_node(std::move(n)));
}

Expr Expr::pow(const Expr& base, int exponent) {
  require(exponent >= 0, "SchemaError", "pow wants a non-negative exponent");
  Node n{Op::kPow, Rat(0)};
  n.exponent = exponent;
  n.args = {base};
  return Expr(make_node(std::move(n)));
}

Expr Expr::psi(const Expr& arg) {
  Node n{Op::kPsi, Rat(0)};
  n.args = {arg};
  return Expr(make_node(std::move(n)));
}

Expr Expr::dmw(const Expr& arg) {
  Node n{Op::kDmw, Rat(0)};
  n.args = {arg};
  return Expr(make_node(std::move(n)));
}

Expr Expr::chi(const QuadForm& q, const Expr& b, std::vector<int> u_slots) {
  require(static_cast<int>(u_slots.size()) == q.dim(), "SchemaError",
          "chi: slot count must match the form dimension");
  Node n{Op::kChi, Rat(0)};
  n.args = {b};
  n.two_a = to_dmat(q.mat) * 2.0;
  n.u_slots = std::move(u_slots);
  return Expr(make_node(std::move(n)));
}

Expr Expr::form(const QuadForm& q, const std::vector<int>& slots) {
  require(static_cast<int>(slots.size()) == q.dim(), "SchemaError",
          "form: slot count must match the form dimension");
  Expr sum;
  for (int i = 0; i < q.dim(); ++i)
    for (int j = 0; j < q.dim(); ++j) {
      if (q.mat(i, j) == 0) continue;
      sum = sum + constant(q.mat(i, j)) * var(slots[i]) * var(slots[j]);
    }
  return sum;
}

Expr Expr::reindex(const std::vector<int>& slot_map) const {
  const Node& n = *node;
  switch (n.op) {
    case Op::kConst:
      return *this;
    case Op::kVar: {
      int s = n.slot;
      if (s >= 0 && s < static_cast<int>(slot_map.size())) s = slot_map[s];
      return var(s);
    }
    default: {
      Node copy = n;
      for (auto& a : copy.args) a = a.reindex(slot_map);
      if (n.op == Op::kChi) {
        for (auto& s : copy.u_slots)
          if (s >= 0 && s < static_cast<int>(slot_map.size())) s = slot_map[s];
      }
      return Expr(make_node(std::move(copy)));
    }
  }
}

double Expr::eval(const std::vector<double>& values) const {
  const Node& n = *node;
  switch (n.op) {
    case Op::kConst:
      return to_double(n.value);
    case Op::kVar:
      require(n.slot < static_cast<int>(values.size()), "SchemaError",
              "expression uses an unbound variable slot");
      return values[n.slot];
    case Op::kAdd:
      return n.args[0].eval(values) + n.args[1].eval(values);
    case Op::kSub:
      return n.args[0].eval(values) - n.args[1].eval(values);
    case Op::kMul:
      return n.args[0].eval(values) * n.args[1].eval(values);
    case Op::kDiv:
      return n.args[0].eval(values) / n.args[1].eval(values);
    case Op::kNeg:
      return -n.args[0].eval(values);
    case Op::kPow:
      return std::pow(n.args[0].eval(values), n.exponent);
    case Op::kPsi:
      return CutoffProfile{}.psi(n.args[0].eval(values));
    case Op::kDmw:
      return d_profile_minus_w(n.args[0].eval(values));
    case Op::kChi: {
      if (n.two_a.rows() == 0) return 1.0;  // empty product
      double b = n.args[0].eval(values);
      if (b <= 0) return 0.0;
      double out = 1.0;
      const int d = n.two_a.rows();
      for (int j = 0; j < d && out != 0; ++j) {
        double z = 0;
        for (int k = 0; k < d; ++k) {
          if (n.u_slots[k] < 0) continue;
          z += n.two_a(j, k) * values[n.u_slots[k]];
        }
        out *= n.profile.psi(z / b);
      }
      return out;
    }
  }
  return 0;
}

Jet2 Expr::jet(const std::vector<double>& values,
               const std::vector<int>& active) const {
  const Node& n = *node;
  const int na = static_cast<int>(active.size());
  require(na <= Jet2::kMaxJet, "SchemaError",
          "too many active jet variables");
  switch (n.op) {
    case Op::kConst:
      return jet_const(to_double(n.value), na);
    case Op::kVar: {
      Jet2 j(na);
      j.v = values[n.slot];
      for (int i = 0; i < na; ++i)
        if (active[i] == n.slot) j.g[i] = 1.0;
      return j;
    }
    case Op::kAdd:
      return jet_add(n.args[0].jet(values, active),
                     n.args[1].jet(values, active));
    case Op::kSub:
      return jet_sub(n.args[0].jet(values, active),
                     n.args[1].jet(values, active));
    case Op::kMul:
      return jet_mul(n.args[0].jet(values, active),
                     n.args[1].jet(values, active));
    case Op::kDiv:
      return jet_mul(n.args[0].jet(values, active),
                     jet_inv(n.args[1].jet(values, active)));
    case Op::kNeg:
      return jet_neg(n.args[0].jet(values, active));
    case Op::kPow:
      return jet_pow(n.args[0].jet(values, active), n.exponent);
    case Op::kPsi: {
      Jet2 u = n.args[0].jet(values, active);
      CutoffProfile p;
      return jet_compose(u, p.psi(u.v), p.dpsi(u.v), p.d2psi(u.v));
    }
    case Op::kDmw: {
      Jet2 u = n.args[0].jet(values, active);
      return jet_compose(u, d_profile_minus_w(u.v), d_profile_minus_w_d1(u.v),
                         d_profile_minus_w_d2(u.v));
    }
    case Op::kChi: {
      if (n.two_a.rows() == 0) return jet_const(1.0, na);
      Jet2 b = n.args[0].jet(values, active);
      if (b.v <= 0) return jet_const(0.0, na);
      // outside the support one factor vanishes on a neighborhood, and with
      // it the whole jet
      {
        const double rs = to_double(n.profile.support_radius);
        for (int j = 0; j < n.two_a.rows(); ++j) {
          double z = 0;
          for (int k = 0; k < n.two_a.cols(); ++k)
            if (n.u_slots[k] >= 0) z += n.two_a(j, k) * values[n.u_slots[k]];
          if (std::abs(z / b.v) >= rs) return jet_const(0.0, na);
        }
      }
      Jet2 binv = jet_inv(b);
      const int d = n.two_a.rows();
      Jet2 out = jet_const(1.0, na);
      for (int j = 0; j < d; ++j) {
        Jet2 lin = jet_const(0.0, na);
        for (int k = 0; k < d; ++k) {
          if (n.u_slots[k] < 0) continue;
          Jet2 vk(na);
          vk.v = values[n.u_slots[k]];
          for (int i = 0; i < na; ++i)
            if (active[i] == n.u_slots[k]) vk.g[i] = 1.0;
          double c = n.two_a(j, k);
          vk.v *= c;
          for (int i = 0; i < na; ++i) vk.g[i] *= c;
          lin = jet_add(lin, vk);
        }
        Jet2 z = jet_mul(lin, binv);
        out = jet_mul(out, jet_compose(z, n.profile.psi(z.v),
                                       n.profile.dpsi(z.v),
                                       n.profile.d2psi(z.v)));
      }
      return out;
    }
  }
  return Jet2(na);
}

std::string Expr::str() const {
  const Node& n = *node;
  std::ostringstream os;
  switch (n.op) {
    case Op::kConst:
      os << rat_str(n.value);
      break;
    case Op::kVar:
      if (n.slot == kSlotX)
        os << "x";
      else if (n.slot == kSlotW)
        os << "w";
      else
        os << "v" << (n.slot - 2 + 1);
      break;
    case Op::kAdd:
      os << "(" << n.args[0].str() << " + " << n.args[1].str() << ")";
      break;
    case Op::kSub:
      os << "(" << n.args[0].str() << " - " << n.args[1].str() << ")";
      break;
    case Op::kMul:
      os << "(" << n.args[0].str() << " * " << n.args[1].str() << ")";
      break;
    case Op::kDiv:
      os << "(" << n.args[0].str() << " / " << n.args[1].str() << ")";
      break;
    case Op::kNeg:
      os << "(-" << n.args[0].str() << ")";
      break;
    case Op::kPow:
      os << "pow(" << n.args[0].str() << ", " << n.exponent << ")";
      break;
    case Op::kPsi:
      os << "psi(" << n.args[0].str() << ")";
      break;
    case Op::kDmw:
      os << "dmw(" << n.args[0].str() << ")";
      break;
    case Op::kChi:
      os << "chi[dim " << n.two_a.rows() << "](b = " << n.args[0].str() << ")";
      break;
  }
  return os.str();
}

std::string Expr::json_text() const {
  const Node& n = *node;
  using J = nlohmann::ordered_json;
  std::function<J(const Expr&)> conv = [&](const Expr& e) -> J {
    const Node& nd = *e.node;
    switch (nd.op) {
      case Op::kConst:
        return J{{"rat", rat_str(nd.value)}};
      case Op::kVar:
        if (nd.slot == kSlotX) return J{{"var", "x"}};
        if (nd.slot == kSlotW) return J{{"var", "w"}};
        return J{{"var", "v" + std::to_string(nd.slot - 2 + 1)}};
      case Op::kAdd:
        return J{{"op", "+"}, {"args", {conv(nd.args[0]), conv(nd.args[1])}}};
      case Op::kSub:
        return J{{"op", "-"}, {"args", {conv(nd.args[0]), conv(nd.args[1])}}};
      case Op::kMul:
        return J{{"op", "*"}, {"args", {conv(nd.args[0]), conv(nd.args[1])}}};
      case Op::kDiv:
        return J{{"op", "/"}, {"args", {conv(nd.args[0]), conv(nd.args[1])}}};
      case Op::kNeg:
        return J{{"op", "neg"}, {"args", {conv(nd.args[0])}}};
      case Op::kPow:
        return J{{"op", "pow"}, {"base", conv(nd.args[0])}, {"exp", nd.exponent}};
      case Op::kPsi:
        return J{{"op", "psi"}, {"arg", conv(nd.args[0])}};
      case Op::kDmw:
        return J{{"op", "dmw"}, {"arg", conv(nd.args[0])}};
      case Op::kChi:
        return J{{"op", "chi-internal"}};
    }
    return J{};
  };
  (void)n;
  return conv(*this).dump();
}

namespace {

Expr from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Expr::constant(Rat(j.get<long long>()));
  if (j.is_number_float()) {
    DMat d(1, 1);
    d(0, 0) = j.get<double>();
    return Expr::constant(to_rational(d)(0, 0));  // binary-exact
  }
  if (j.is_string()) return Expr::constant(parse_rat(j.get<std::string>()));
  require(j.is_object(), "SchemaError", "expression node must be an object");
  if (j.contains("rat"))
    return Expr::constant(parse_rat(j["rat"].get<std::string>()));
  if (j.contains("num")) return from_json(j["num"]);
  if (j.contains("var")) {
    std::string v = j["var"].get<std::string>();
    if (v == "x") return Expr::x();
    if (v == "w") return Expr::w();
    if ((v[0] == 'v' || v[0] == 'u') && v.size() > 1) {
      int idx = std::stoi(v.substr(1));
      require(idx >= 1, "SchemaError", "variable indices are 1-based");
      return Expr::v(idx - 1);
    }
    raise("SchemaError", "unknown variable '" + v + "'");
  }
  require(j.contains("op"), "SchemaError", "expression node needs var/op/rat");
  std::string op = j["op"].get<std::string>();
  if (op == "pow") return Expr::pow(from_json(j["base"]), j["exp"].get<int>());
  if (op == "psi") return Expr::psi(from_json(j["arg"]));
  if (op == "dmw") return Expr::dmw(from_json(j["arg"]));
  if (op == "neg") return -from_json(j["args"][0]);
  require(j.contains("args"), "SchemaError",
          "operator '" + op + "' is not part of the input grammar");
  auto& args = j["args"];
  require(args.is_array() && args.size() >= 2, "SchemaError",
          "operator needs an argument list");
  Expr acc = from_json(args[0]);
  for (size_t i = 1; i < args.size(); ++i) {
    Expr rhs = from_json(args[i]);
    if (op == "+")
      acc = acc + rhs;
    else if (op == "-")
      acc = acc - rhs;
    else if (op == "*")
      acc = acc * rhs;
    else if (op == "/")
      acc = acc / rhs;
    else
      raise("SchemaError", "unknown operator '" + op + "'");
  }
  return acc;
}

}  // namespace

Expr parse_expr_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    raise("ParseError", std::string("bad expression JSON: ") + e.what());
  }
  return from_json(j);
}

}  // namespace gfc
