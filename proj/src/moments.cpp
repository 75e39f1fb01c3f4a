#include "topoderiv/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace topoderiv {

namespace {

constexpr double kOriginMargin = 1e-9;
constexpr double kSymmetryTol = 1e-12;

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

double det3(const Vec& a, const Vec& b, const Vec& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

double segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  Vec ab = sub(b, a), ap = sub(p, a);
  double len2 = dot(ab, ab, 2);
  double t = len2 > 0 ? std::clamp(dot(ap, ab, 2) / len2, 0.0, 1.0) : 0.0;
  return norm(sub(ap, scale(ab, t)), 2);
}

// Closest point on triangle, after Ericson's Real-Time Collision Detection.
double triangle_distance(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
  Vec ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
  double d1 = dot(ab, ap, 3), d2 = dot(ac, ap, 3);
  if (d1 <= 0 && d2 <= 0) return norm(ap, 3);
  Vec bp = sub(p, b);
  double d3 = dot(ab, bp, 3), d4 = dot(ac, bp, 3);
  if (d3 >= 0 && d4 <= d3) return norm(bp, 3);
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    double v = d1 / (d1 - d3);
    return norm(sub(p, add(a, scale(ab, v))), 3);
  }
  Vec cp = sub(p, c);
  double d5 = dot(ab, cp, 3), d6 = dot(ac, cp, 3);
  if (d6 >= 0 && d5 <= d6) return norm(cp, 3);
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    double w = d2 / (d2 - d6);
    return norm(sub(p, add(a, scale(ac, w))), 3);
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return norm(sub(p, add(b, scale(sub(c, b), w))), 3);
  }
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return norm(sub(p, add(a, add(scale(ab, v), scale(ac, w)))), 3);
}

std::vector<std::array<int, 3>> boundary_faces(const InclusionShape& s) {
  std::map<std::array<int, 3>, int> count;
  std::map<std::array<int, 3>, std::array<int, 3>> original;
  for (const auto& t : s.tets) {
    const int f[4][4] = {{t[1], t[2], t[3], t[0]}, {t[0], t[3], t[2], t[1]},
                         {t[0], t[1], t[3], t[2]}, {t[0], t[2], t[1], t[3]}};
    for (const auto& face : f) {
      std::array<int, 3> key{face[0], face[1], face[2]};
      std::sort(key.begin(), key.end());
      ++count[key];
      std::array<int, 3> tri{face[0], face[1], face[2]};
      const Vec& a = s.vertices[tri[0]];
      // orient so the opposite vertex lies behind the face
      if (det3(sub(s.vertices[tri[1]], a), sub(s.vertices[tri[2]], a), sub(s.vertices[face[3]], a)) > 0)
        std::swap(tri[1], tri[2]);
      original[key] = tri;
    }
  }
  std::vector<std::array<int, 3>> out;
  for (const auto& [key, n] : count)
    if (n == 1) out.push_back(original[key]);
  return out;
}

bool in_tet(const Vec& p, const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  double vol = det3(sub(b, a), sub(c, a), sub(d, a));
  if (vol == 0.0) return false;
  double l1 = det3(sub(p, a), sub(c, a), sub(d, a)) / vol;
  double l2 = det3(sub(b, a), sub(p, a), sub(d, a)) / vol;
  double l3 = det3(sub(b, a), sub(c, a), sub(p, a)) / vol;
  double l0 = 1.0 - l1 - l2 - l3;
  return l0 >= 0 && l1 >= 0 && l2 >= 0 && l3 >= 0;
}

// Ball moments: products of Gamma functions at half integers, kept as
// rationals times a power of pi so that |B_1| comes out as pi exactly.
double ball_moment(const Exponent& e, int dim) {
  int m_sum = 0;
  double rational = 1.0;
  for (int i = 0; i < dim; ++i) {
    if (e[i] % 2 != 0) return 0.0;
    int m = e[i] / 2;
    m_sum += m;
    rational *= factorial(2 * m) / (std::pow(4.0, m) * factorial(m));
  }
  const int deg = total_degree(e);
  if (dim == 2) return 2.0 * std::numbers::pi * rational / factorial(m_sum) / (deg + 2);
  // Gamma(M + 3/2) = (2M+2)! / (4^(M+1) (M+1)!) sqrt(pi)
  double g = factorial(2 * m_sum + 2) / (std::pow(4.0, m_sum + 1) * factorial(m_sum + 1));
  return 2.0 * std::numbers::pi * rational / g / (deg + 3);
}

// Moments of a simplex with vertices v[0..dim], multiplied by `weight`
// (signed Jacobian determinant).
void add_simplex_moments(const std::vector<Vec>& v, int dim, double weight,
                         const std::vector<Exponent>& exps, std::map<Exponent, double>& acc) {
  int n_max = 0;
  for (const auto& e : exps) n_max = std::max(n_max, total_degree(e));
  // Linear maps x_a(lambda) as polynomials in lambda (dim variables).
  std::vector<std::vector<Polynomial>> powers(dim);
  for (int a = 0; a < dim; ++a) {
    Polynomial lin = Polynomial::constant(dim, v[0][a]);
    for (int j = 1; j <= dim; ++j) {
      Exponent ej{0, 0, 0};
      ej[j - 1] = 1;
      lin.add_term(ej, v[j][a] - v[0][a]);
    }
    powers[a].push_back(Polynomial::constant(dim, 1.0));
    for (int p = 1; p <= n_max; ++p) powers[a].push_back(powers[a].back() * lin);
  }
  for (const auto& e : exps) {
    Polynomial prod = powers[0][e[0]];
    for (int a = 1; a < dim; ++a) prod = prod * powers[a][e[a]];
    double s = 0.0;
    for (const auto& [b, c] : prod.terms()) {
      double num = 1.0;
      for (int a = 0; a < dim; ++a) num *= factorial(b[a]);
      s += c * num / factorial(total_degree(b) + dim);
    }
    acc[e] += weight * s;
  }
}

}  // namespace

InclusionShape InclusionShape::ball(int dim) {
  InclusionShape s;
  s.kind = Kind::Ball;
  s.dim = dim;
  return s;
}

InclusionShape InclusionShape::polygon(std::vector<Vec> vertices) {
  InclusionShape s;
  s.kind = Kind::Polygon;
  s.dim = 2;
  s.vertices = std::move(vertices);
  return s;
}

InclusionShape InclusionShape::tet_mesh(std::vector<Vec> vertices, std::vector<std::array<int, 4>> tets) {
  InclusionShape s;
  s.kind = Kind::TetMesh;
  s.dim = 3;
  s.vertices = std::move(vertices);
  s.tets = std::move(tets);
  return s;
}

std::string InclusionShape::kind_name() const {
  switch (kind) {
    case Kind::Ball: return "ball";
    case Kind::Polygon: return "polygon";
    case Kind::TetMesh: return "tets";
  }
  return "?";
}

double InclusionShape::outer_radius() const {
  if (kind == Kind::Ball) return 1.0;
  double r = 0.0;
  for (const auto& v : vertices) r = std::max(r, norm(v, dim));
  return r;
}

bool InclusionShape::contains(const Vec& x) const {
  switch (kind) {
    case Kind::Ball: return norm(x, dim) < 1.0;
    case Kind::Polygon: {
      bool inside = false;
      const std::size_t n = vertices.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec& a = vertices[i];
        const Vec& b = vertices[j];
        if ((a[1] > x[1]) != (b[1] > x[1])) {
          double xc = (b[0] - a[0]) * (x[1] - a[1]) / (b[1] - a[1]) + a[0];
          if (x[0] < xc) inside = !inside;
        }
      }
      return inside;
    }
    case Kind::TetMesh:
      for (const auto& t : tets)
        if (in_tet(x, vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]])) return true;
      return false;
  }
  return false;
}

double InclusionShape::boundary_distance(const Vec& x) const {
  switch (kind) {
    case Kind::Ball: return std::abs(1.0 - norm(x, dim));
    case Kind::Polygon: {
      double d = INFINITY;
      const std::size_t n = vertices.size();
      for (std::size_t i = 0; i < n; ++i)
        d = std::min(d, segment_distance(x, vertices[i], vertices[(i + 1) % n]));
      return d;
    }
    case Kind::TetMesh: {
      double d = INFINITY;
      for (const auto& f : boundary_faces(*this))
        d = std::min(d, triangle_distance(x, vertices[f[0]], vertices[f[1]], vertices[f[2]]));
      return d;
    }
  }
  return 0.0;
}

void validate_shape(const InclusionShape& s) {
  std::vector<std::string> errs;
  if (s.dim != 2 && s.dim != 3) errs.push_back("dimension must be 2 or 3");
  if (s.kind == InclusionShape::Kind::Polygon) {
    if (s.dim != 2) errs.push_back("polygons require dim 2");
    if (s.vertices.size() < 3) errs.push_back("polygon needs at least 3 vertices");
    double area = 0.0;
    for (std::size_t i = 0; i < s.vertices.size(); ++i)
      area += cross2(s.vertices[i], s.vertices[(i + 1) % s.vertices.size()]);
    if (std::abs(area) < 1e-14) errs.push_back("polygon has zero area");
  }
  if (s.kind == InclusionShape::Kind::TetMesh) {
    if (s.dim != 3) errs.push_back("tet meshes require dim 3");
    if (s.tets.empty()) errs.push_back("tet mesh is empty");
    for (std::size_t i = 0; i < s.tets.size(); ++i) {
      const auto& t = s.tets[i];
      bool ok = true;
      for (int k : t)
        if (k < 0 || k >= static_cast<int>(s.vertices.size())) ok = false;
      if (!ok) {
        errs.push_back("tet " + std::to_string(i) + " references a missing vertex");
        continue;
      }
      const auto& v = s.vertices;
      double vol = det3(sub(v[t[1]], v[t[0]]), sub(v[t[2]], v[t[0]]), sub(v[t[3]], v[t[0]]));
      if (std::abs(vol) < 1e-14) errs.push_back("tet " + std::to_string(i) + " is degenerate");
    }
  }
  if (errs.empty()) {
    Vec o{0, 0, 0};
    if (!s.contains(o)) errs.push_back("shape does not contain the origin");
    else if (s.boundary_distance(o) < kOriginMargin) errs.push_back("origin is within 1e-9 of the shape boundary");
  }
  if (!errs.empty()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < errs.size(); ++i) os << (i ? "; " : "") << errs[i];
    throw std::invalid_argument(os.str());
  }
}

std::vector<std::array<int, 3>> outward_boundary_faces(const InclusionShape& shape) {
  if (shape.kind != InclusionShape::Kind::TetMesh) throw std::invalid_argument("outward_boundary_faces needs a tet mesh");
  return boundary_faces(shape);
}

double MomentTable::measure() const { return at({0, 0, 0}); }

double MomentTable::at(const Exponent& e) const {
  if (total_degree(e) > n_max) throw std::out_of_range("moment degree exceeds table order");
  auto it = values.find(e);
  return it == values.end() ? 0.0 : it->second;
}

MomentTable compute_moments(const InclusionShape& shape, int n_max) {
  if (n_max < 0 || n_max > kMaxMomentDegree) throw std::invalid_argument("n_max must lie in [0, 12]");
  validate_shape(shape);
  MomentTable t;
  t.dim = shape.dim;
  t.n_max = n_max;
  const auto exps = multi_indices(shape.dim, n_max);
  switch (shape.kind) {
    case InclusionShape::Kind::Ball:
      for (const auto& e : exps) t.values[e] = ball_moment(e, shape.dim);
      break;
    case InclusionShape::Kind::Polygon: {
      std::map<Exponent, double> acc;
      const auto& v = shape.vertices;
      double signed_area = 0.0;
      for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        double det = cross2(sub(v[i], v[0]), sub(v[i + 1], v[0]));
        signed_area += det;
        if (det != 0.0) add_simplex_moments({v[0], v[i], v[i + 1]}, 2, det, exps, acc);
      }
      double sign = signed_area < 0 ? -1.0 : 1.0;
      for (const auto& e : exps) t.values[e] = sign * acc[e];
      break;
    }
    case InclusionShape::Kind::TetMesh: {
      std::map<Exponent, double> acc;
      const auto& v = shape.vertices;
      for (const auto& tt : shape.tets) {
        double det = det3(sub(v[tt[1]], v[tt[0]]), sub(v[tt[2]], v[tt[0]]), sub(v[tt[3]], v[tt[0]]));
        add_simplex_moments({v[tt[0]], v[tt[1]], v[tt[2]], v[tt[3]]}, 3, std::abs(det), exps, acc);
      }
      for (const auto& e : exps) t.values[e] = acc[e];
      break;
    }
  }
  return t;
}

double weighted_moment(const MomentTable& table, const Polynomial& poly) {
  if (poly.degree() > table.n_max) throw std::out_of_range("polynomial degree exceeds moment table order");
  double s = 0.0;
  for (const auto& [e, c] : poly.terms()) s += c * table.at(e);
  return s;
}

bool is_symmetric(const InclusionShape& shape) {
  if (shape.kind == InclusionShape::Kind::Ball) return true;
  const auto& v = shape.vertices;
  for (int axis = 0; axis < shape.dim; ++axis) {
    for (const auto& p : v) {
      Vec q = p;
      q[axis] = -q[axis];
      bool found = false;
      for (const auto& r : v)
        if (norm(sub(q, r), shape.dim) <= kSymmetryTol) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  }
  return true;
}

DataJet make_data_jet(const Polynomial& f1, const Polynomial& f2, const Polynomial& u_star,
                      const Vec& x0, int order) {
  DataJet j;
  j.x0 = x0;
  j.order = order;
  j.f1 = f1.shifted(x0).truncated(order);
  j.f2 = f2.shifted(x0).truncated(order);
  j.diff = j.f1 - j.f2;
  j.u_star = u_star.shifted(x0).truncated(order);
  return j;
}

Polynomial F_polynomial(int k, const DataJet& jet) {
  if (k < 1) throw std::invalid_argument("F_polynomial requires k >= 1");
  if (k == 1) return Polynomial(jet.diff.dim());
  if (k - 2 > jet.order) throw std::invalid_argument("data jet order too small for F^(k)");
  return jet.diff.homogeneous_part(k - 2);
}

}  // namespace topoderiv
