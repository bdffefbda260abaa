#include "gfc/jsonio.hpp"

#include <fstream>
#include <sstream>

namespace gfc {

namespace {

Json rmat_to_json(const RMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

RMat rmat_from_json(const Json& j, int rows = -1, int cols = -1) {
  require(j.is_array(), "SchemaError", "matrix must be an array of rows");
  int r = static_cast<int>(j.size());
  int c = r > 0 ? static_cast<int>(j[0].size()) : 0;
  if (rows >= 0)
    require(r == rows && c == cols, "SchemaError", "matrix shape mismatch");
  RMat m(r, c);
  for (int i = 0; i < r; ++i) {
    require(static_cast<int>(j[i].size()) == c, "SchemaError", "ragged matrix");
    for (int k = 0; k < c; ++k) {
      const auto& cell = j[i][k];
      if (cell.is_string())
        m(i, k) = parse_rat(cell.get<std::string>());
      else if (cell.is_number_integer())
        m(i, k) = Rat(cell.get<long long>());
      else {
        DMat d(1, 1);
        d(0, 0) = cell.get<double>();
        m(i, k) = to_rational(d)(0, 0);
      }
    }
  }
  return m;
}

DMat dmat_from_json(const Json& j) {
  int r = static_cast<int>(j.size());
  int c = r > 0 ? static_cast<int>(j[0].size()) : 0;
  DMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) {
      const auto& cell = j[i][k];
      m(i, k) = cell.is_string() ? to_double(parse_rat(cell.get<std::string>()))
                                 : cell.get<double>();
    }
  return m;
}

Json dmat_to_json(const DMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Json quadform_to_json(const QuadForm& q) {
  return Json{{"dim", q.dim()}, {"mat", rmat_to_json(q.mat)}};
}

QuadForm quadform_from_json(const Json& j) {
  require(j.contains("mat"), "SchemaError", "quadform needs a 'mat'");
  QuadForm q(rmat_from_json(j["mat"]));
  if (j.contains("dim"))
    require(j["dim"].get<int>() == q.dim(), "SchemaError",
            "declared dim disagrees with the matrix");
  check_quadform(q);
  return q;
}

Json lagrangian_to_json(const LagrD& l) {
  return Json{{"m", l.m}, {"n", l.n}, {"basis", dmat_to_json(l.basis)}};
}

LagrD lagrangian_from_json(const Json& j) {
  LagrD l;
  l.m = j.at("m").get<int>();
  l.n = j.at("n").get<int>();
  l.basis = dmat_from_json(j.at("basis"));
  check_lagrangian(l);
  return l;
}

Json path_to_json(const SymplPath& p) {
  Json samples = Json::array();
  for (const DMat& s : p.samples) samples.push_back(dmat_to_json(s));
  return Json{{"m", p.m}, {"samples", samples}};
}

SymplPath path_from_json(const Json& j) {
  SymplPath p;
  p.m = j.at("m").get<int>();
  for (const auto& s : j.at("samples")) p.samples.push_back(dmat_from_json(s));
  if (j.contains("near_identity_radius"))
    p.near_identity_radius = j["near_identity_radius"].get<double>();
  p.check();
  return p;
}

Json graded_to_json(const GradedAbGroup& g) {
  Json out = Json::array();
  for (const auto& [d, piece] : g.deg) {
    Json tor = Json::array();
    for (const auto& t : piece.torsion) tor.push_back(t.str());
    out.push_back(Json{{"degree", d}, {"free", piece.free}, {"torsion", tor}});
  }
  return out;
}

Json stable_lift_to_json(const StableLiftD& l) {
  DMat m = l.form.mat;
  return Json{{"m", l.m}, {"n", l.n}, {"form", dmat_to_json(m)}};
}

StableLiftD stable_lift_from_json(const Json& j) {
  StableLiftD l;
  l.m = j.at("m").get<int>();
  l.n = j.at("n").get<int>();
  l.form = QFormD(dmat_from_json(j.at("form")));
  check_lift(l);
  return l;
}

namespace {
BaseDesc base_from_json(const Json& j) {
  BaseDesc b;
  std::string type = j.at("type").get<std::string>();
  if (type == "point") {
    b.kind = BaseDesc::Kind::point;
  } else if (type == "interval") {
    b.kind = BaseDesc::Kind::interval;
    b.lo = j.value("lo", 0.0);
    b.hi = j.value("hi", 1.0);
  } else if (type == "circle") {
    b.kind = BaseDesc::Kind::circle;
    b.lo = 0;
    b.hi = 1;
  } else {
    raise("SchemaError", "unknown base type '" + type + "'");
  }
  return b;
}

Json base_to_json(const BaseDesc& b) {
  switch (b.kind) {
    case BaseDesc::Kind::point:
      return Json{{"type", "point"}};
    case BaseDesc::Kind::interval:
      return Json{{"type", "interval"}, {"lo", b.lo}, {"hi", b.hi}};
    case BaseDesc::Kind::circle:
      return Json{{"type", "circle"}};
  }
  return {};
}
}  // namespace

Json linfn_to_json(const LinFn& f) {
  Json vbox = Json::array();
  for (auto [lo, hi] : f.v_box) vbox.push_back(Json::array({lo, hi}));
  return Json{{"base", base_to_json(f.base)},
              {"n", f.n},
              {"g", Json::parse(f.g.json_text())},
              {"epsilon", Json::parse(f.epsilon.json_text())},
              {"support", Json{{"w", Json::array({f.w_lo, f.w_hi})}, {"v", vbox}}},
              {"b", Json::parse(f.bound.json_text())},
              {"b_is_bound", f.b_declared_bound},
              {"feature_scale", f.feature_scale}};
}

LinFn linfn_from_json(const Json& j) {
  LinFn f;
  f.base = base_from_json(j.at("base"));
  f.n = j.at("n").get<int>();
  f.g = j.contains("g") ? parse_expr_json(j["g"].dump()) : Expr();
  f.epsilon =
      j.contains("epsilon") ? parse_expr_json(j["epsilon"].dump()) : Expr();
  const Json& support = j.at("support");
  f.w_lo = support.at("w")[0].get<double>();
  f.w_hi = support.at("w")[1].get<double>();
  for (const auto& vb : support.at("v"))
    f.v_box.push_back({vb[0].get<double>(), vb[1].get<double>()});
  f.bound = j.contains("b") ? parse_expr_json(j["b"].dump()) : Expr();
  f.b_declared_bound = j.value("b_is_bound", false);
  f.feature_scale = j.value("feature_scale", 1.0);
  check_linfn(f);
  return f;
}

namespace {
CellComplex cellcomplex_from_json(const Json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "interval")
    return CellComplex::interval(j.at("segments").get<int>(),
                                 j.value("lo", 0.0), j.value("hi", 1.0));
  if (type == "circle") return CellComplex::circle(j.at("segments").get<int>());
  if (type == "complex") {
    std::vector<std::vector<int>> simplices;
    for (const auto& s : j.at("simplices"))
      simplices.push_back(s.get<std::vector<int>>());
    return CellComplex::simplicial(j.at("vertices").get<int>(), simplices);
  }
  raise("SchemaError", "unknown base type '" + type + "'");
}
}  // namespace

Json cocycle_to_json(const QCocycle& c) {
  Json regions = Json::array();
  for (const auto& r : c.cover.regions) {
    Json cells = Json::array();
    for (int cell = 0; cell < c.cover.base.size(); ++cell)
      if (r[cell] && c.cover.base.is_maximal(cell)) cells.push_back(cell);
    regions.push_back(cells);
  }
  Json q = Json::object();
  for (const auto& [pair, forms] : c.q) {
    Json arr = Json::array();
    for (const auto& f : forms) arr.push_back(quadform_to_json(f));
    q[std::to_string(pair.first) + "," + std::to_string(pair.second)] = arr;
  }
  Json base;
  switch (c.cover.base.chart) {
    case CellComplex::Chart::interval:
      base = Json{{"type", "interval"}, {"segments", c.cover.base.nseg}};
      break;
    case CellComplex::Chart::circle:
      base = Json{{"type", "circle"}, {"segments", c.cover.base.nseg}};
      break;
    default:
      base = Json{{"type", "complex"}};
  }
  return Json{
      {"base", base}, {"regions", regions}, {"dims", c.dims}, {"q", q}};
}

QCocycle cocycle_from_json(const Json& j) {
  QCocycle c;
  c.cover.base = cellcomplex_from_json(j.at("base"));
  for (const auto& r : j.at("regions"))
    c.cover.regions.push_back(
        c.cover.base.open_region(r.get<std::vector<int>>()));
  if (j.contains("order") && j["order"].is_array()) {
    const int n = c.cover.count();
    c.cover.strictly_less.assign(n, std::vector<char>(n, 0));
    for (const auto& pr : j["order"])
      c.cover.strictly_less[pr[0].get<int>()][pr[1].get<int>()] = 1;
    // transitive closure
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (c.cover.strictly_less[a][k] && c.cover.strictly_less[k][b])
            c.cover.strictly_less[a][b] = 1;
  } else {
    c.cover.set_total_order();
  }
  c.dims = j.at("dims").get<std::vector<int>>();
  for (const auto& [key, forms] : j.at("q").items()) {
    auto comma = key.find(',');
    require(comma != std::string::npos, "SchemaError",
            "q keys look like \"i,j\"");
    int a = std::stoi(key.substr(0, comma));
    int b = std::stoi(key.substr(comma + 1));
    std::vector<QuadForm> fs;
    for (const auto& f : forms) fs.push_back(quadform_from_json(f));
    c.q[{a, b}] = std::move(fs);
  }
  c.check_shapes();
  return c;
}

DiscreteMonoid monoid_from_json(const Json& j) {
  DiscreteMonoid m;
  m.names = j.at("elements").get<std::vector<std::string>>();
  for (const auto& row : j.at("table"))
    m.table.push_back(row.get<std::vector<int>>());
  m.unit = j.value("unit", 0);
  m.check();
  return m;
}

Json critpoints_to_json(const std::vector<CritPoint>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) {
    out.push_back(Json{{"x", p.x},
                       {"w", p.w},
                       {"v", p.v},
                       {"value", p.value},
                       {"index", p.index},
                       {"coindex", p.coindex},
                       {"dfdx", p.dfdx}});
  }
  return out;
}

std::string field_to_csv(const CubicalField& f) {
  std::ostringstream os;
  const int d = f.dims();
  for (int i = 0; i < d; ++i) os << "x" << i << ",";
  os << "value\n";
  std::vector<int> idx(d, 0);
  for (size_t lin = 0; lin < f.values.size(); ++lin) {
    for (int i = 0; i < d; ++i) os << f.lo[i] + idx[i] * f.spacing(i) << ",";
    os << f.values[lin] << "\n";
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < f.npoints[i]) break;
      idx[i] = 0;
    }
  }
  return os.str();
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "FileNotFound", "cannot open '" + path + "'");
  try {
    Json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    raise("ParseError", "bad JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), "IoError", "cannot write '" + path + "'");
  out << text;
  require(out.good(), "IoError", "write failed for '" + path + "'");
}

}  // namespace gfc
