#include "topoderiv/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace topoderiv {

namespace {

using nlohmann::json;

Vec read_point(const json& j, int dim, const std::string& what, std::vector<std::string>& err) {
  Vec v{0, 0, 0};
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    err.push_back(what + " must be an array of " + std::to_string(dim) + " numbers");
    return v;
  }
  for (int a = 0; a < dim; ++a) {
    if (!j[a].is_number()) {
      err.push_back(what + " must contain numbers");
      return v;
    }
    v[a] = j[a].get<double>();
  }
  return v;
}

InclusionShape read_shape(const json& j, int dim, std::vector<std::string>& err) {
  const std::string kind = j.value("kind", std::string("ball"));
  if (kind == "ball") return InclusionShape::ball(dim);
  if (!j.contains("vertices") || !j["vertices"].is_array()) {
    err.push_back("shape." + kind + " needs a vertices array");
    return InclusionShape::ball(dim);
  }
  std::vector<Vec> verts;
  for (const auto& v : j["vertices"]) verts.push_back(read_point(v, dim, "shape vertex", err));
  if (kind == "polygon") {
    if (dim != 2) err.push_back("polygon shapes need dim = 2");
    return InclusionShape::polygon(verts);
  }
  if (kind == "tet_mesh") {
    if (dim != 3) err.push_back("tet_mesh shapes need dim = 3");
    std::vector<std::array<int, 4>> tets;
    for (const auto& t : j.value("tets", json::array())) tets.push_back(t.get<std::array<int, 4>>());
    return InclusionShape::tet_mesh(verts, tets);
  }
  err.push_back("unknown shape kind '" + kind + "'");
  return InclusionShape::ball(dim);
}

void check_config(const ProblemConfig& c, std::vector<std::string>& err) {
  const GridSpec& g = c.grid;
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    err.emplace_back(e.what());
  }
  if (c.shape.dim != c.dim) err.push_back("shape dimension differs from dim");
  try {
    validate_shape(c.shape);
  } catch (const std::exception& e) {
    err.push_back(std::string("shape: ") + e.what());
  }
  double diam2 = 0.0;
  for (int a = 0; a < c.dim; ++a) diam2 += (g.hi[a] - g.lo[a]) * (g.hi[a] - g.lo[a]);
  const double diam = std::sqrt(diam2);
  double margin = 1e300;
  for (int a = 0; a < c.dim; ++a) margin = std::min({margin, c.x0[a] - g.lo[a], g.hi[a] - c.x0[a]});
  if (margin < 5 * g.max_h()) err.push_back("x0 must lie at least 5 grid cells from the boundary");
  if (margin < 0.2 * diam) err.push_back("x0 must lie at least 0.2*diam(D) from the boundary");
  if (!(c.alpha1 >= 0.0) || !(c.alpha2 >= 0.0)) err.push_back("alpha1 and alpha2 must be non-negative");
  if (c.order < 1) err.push_back("order must be at least 1");
  if (c.n_max < 0 || c.n_max > kMaxMomentDegree)
    err.push_back("n_max must lie in [0, " + std::to_string(kMaxMomentDegree) + "]");
  const std::pair<const char*, const Polynomial*> data[] = {
      {"f1", &c.f1}, {"f2", &c.f2}, {"u_star", &c.u_star}, {"u_D", &c.u_D}, {"u_N", &c.u_N}};
  for (const auto& [name, p] : data) {
    if (p->dim() != c.dim) err.push_back(std::string(name) + " has the wrong dimension");
    if (p->degree() > c.n_max) err.push_back(std::string(name) + " has degree above n_max");
  }
  const double R = c.shape.outer_radius();
  for (double e : c.eps) {
    if (!(e > 0.0)) {
      err.push_back("eps values must be positive");
      continue;
    }
    if (e * R >= margin) err.push_back("inclusion with eps = " + std::to_string(e) + " leaves the domain");
  }
  if (c.omega_box) {
    const auto& [lo, hi] = *c.omega_box;
    bool inside_closure = true;
    for (int a = 0; a < c.dim; ++a) {
      if (!(hi[a] > lo[a])) err.push_back("omega_box must have positive extent");
      inside_closure = inside_closure && c.x0[a] >= lo[a] && c.x0[a] <= hi[a];
    }
    if (inside_closure) err.push_back("x0 must lie outside the closure of omega_box");
  }
}

}  // namespace

std::string cost_name(CostKind c) { return c == CostKind::L2 ? "L2" : "H1"; }

std::vector<double> default_eps(const GridSpec& g) {
  double side = 1e300;
  for (int a = 0; a < g.dim; ++a) side = std::min(side, g.hi[a] - g.lo[a]);
  std::vector<double> eps;
  for (int i = 6; i <= 14; ++i) eps.push_back(side * std::exp2(-0.5 * i));
  return eps;
}

Polynomial parse_polynomial(const json& j, int dim) {
  if (j.is_number()) return Polynomial::constant(dim, j.get<double>());
  if (!j.is_array()) throw std::invalid_argument("polynomial must be a number or a list of [coeff, exponents]");
  Polynomial p(dim);
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_array() ||
        static_cast<int>(t[1].size()) != dim)
      throw std::invalid_argument("polynomial term must be [coeff, [" + std::to_string(dim) + " exponents]]");
    Exponent e{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      e[a] = t[1][a].get<int>();
      if (e[a] < 0) throw std::invalid_argument("negative exponent in polynomial");
    }
    p.add_term(e, t[0].get<double>());
  }
  return p;
}

json polynomial_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) {
    json ex = json::array();
    for (int a = 0; a < p.dim(); ++a) ex.push_back(e[a]);
    out.push_back(json::array({c, ex}));
  }
  return out;
}

ProblemConfig parse_config(const json& j) {
  std::vector<std::string> err;
  ProblemConfig c;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  c.dim = j.value("dim", 2);
  if (c.dim != 2 && c.dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  const int d = c.dim;

  Vec lo{0, 0, 0}, hi{1, 1, d == 3 ? 1.0 : 0.0};
  std::array<char, 6> faces{'D', 'N', 'N', 'N', 'N', 'N'};
  if (j.contains("domain")) {
    const json& dom = j["domain"];
    if (dom.contains("lo")) lo = read_point(dom["lo"], d, "domain.lo", err);
    if (dom.contains("hi")) hi = read_point(dom["hi"], d, "domain.hi", err);
    if (dom.contains("faces")) {
      const std::string f = dom["faces"].get<std::string>();
      if (static_cast<int>(f.size()) != 2 * d)
        err.push_back("domain.faces needs " + std::to_string(2 * d) + " letters (x-, x+, y-, y+[, z-, z+])");
      else
        for (int i = 0; i < 2 * d; ++i) faces[i] = f[i];
    }
  }
  int nodes = j.value("grid", 129);
  c.grid = GridSpec::box(d, lo, hi, nodes, faces);
  for (int a = 0; a < d; ++a) c.x0[a] = 0.5 * (lo[a] + hi[a]);
  if (d == 2) c.x0[2] = 0.0;
  if (j.contains("x0")) c.x0 = read_point(j["x0"], d, "x0", err);

  c.shape = j.contains("shape") ? read_shape(j["shape"], d, err) : InclusionShape::ball(d);

  auto poly = [&](const char* key, double fallback) {
    if (!j.contains(key)) return Polynomial::constant(d, fallback);
    try {
      return parse_polynomial(j[key], d);
    } catch (const std::exception& e) {
      err.push_back(std::string(key) + ": " + e.what());
      return Polynomial(d);
    }
  };
  c.f1 = poly("f1", 1.0);
  c.f2 = poly("f2", 0.0);
  c.u_star = poly("u_star", 0.0);
  c.u_D = poly("u_D", 0.0);
  c.u_N = poly("u_N", 0.0);
  c.alpha1 = j.value("alpha1", 1.0);
  c.alpha2 = j.value("alpha2", 1.0);
  const std::string cost = j.value("cost", std::string("H1"));
  if (cost == "H1") c.cost = CostKind::H1;
  else if (cost == "L2") c.cost = CostKind::L2;
  else err.push_back("cost must be \"H1\" or \"L2\"");
  c.order = j.value("order", 5);
  c.n_max = j.value("n_max", 8);
  if (j.contains("eps")) c.eps = j["eps"].get<std::vector<double>>();
  else c.eps = default_eps(c.grid);
  if (j.contains("omega_box")) {
    const json& ob = j["omega_box"];
    c.omega_box = std::make_pair(read_point(ob.value("lo", json()), d, "omega_box.lo", err),
                                 read_point(ob.value("hi", json()), d, "omega_box.hi", err));
  }
  const std::string pc = j.value("preconditioner", std::string("fast_diagonal"));
  if (pc == "fast_diagonal") c.preconditioner = Preconditioner::FastDiagonal;
  else if (pc == "jacobi") c.preconditioner = Preconditioner::Jacobi;
  else err.push_back("preconditioner must be \"fast_diagonal\" or \"jacobi\"");

  check_config(c, err);
  if (!err.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < err.size(); ++i) msg += (i ? "; " : "") + err[i];
    throw std::invalid_argument(msg);
  }
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate_config(const ProblemConfig& cfg) {
  std::vector<std::string> err;
  check_config(cfg, err);
  if (!err.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < err.size(); ++i) msg += (i ? "; " : "") + err[i];
    throw std::invalid_argument(msg);
  }
}

}  // namespace topoderiv
