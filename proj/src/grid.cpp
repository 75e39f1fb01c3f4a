#include "topoderiv/grid.hpp"
#include "topoderiv/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"
#include "topoderiv/quadrature.hpp"

namespace topoderiv {

namespace {

constexpr int kFractionSamples = 16;

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
  return s;
}

// Dual cell of a node, clipped to the box.
void dual_cell(const GridSpec& g, const std::array<int, 3>& c, Vec& lo, Vec& hi) {
  lo = {0, 0, 0};
  hi = {0, 0, 0};
  for (int a = 0; a < g.dim; ++a) {
    const double x = g.lo[a] + c[a] * g.h(a);
    lo[a] = c[a] > 0 ? x - 0.5 * g.h(a) : x;
    hi[a] = c[a] < g.n[a] - 1 ? x + 0.5 * g.h(a) : x;
  }
}

// Index range of nodes whose dual cells may meet [lo, hi].
void node_range(const GridSpec& g, const Vec& lo, const Vec& hi, std::array<int, 3>& a, std::array<int, 3>& b) {
  for (int ax = 0; ax < 3; ++ax) {
    if (ax >= g.dim) {
      a[ax] = 0;
      b[ax] = 0;
      continue;
    }
    const double h = g.h(ax);
    a[ax] = std::clamp(static_cast<int>(std::floor((lo[ax] - g.lo[ax]) / h - 0.5)) - 1, 0, g.n[ax] - 1);
    b[ax] = std::clamp(static_cast<int>(std::ceil((hi[ax] - g.lo[ax]) / h + 0.5)) + 1, 0, g.n[ax] - 1);
  }
}

double polygon_area(const std::vector<Vec>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec& a = p[i];
    const Vec& b = p[(i + 1) % p.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * s;
}

// Sutherland-Hodgman against one half plane sign*(x[axis] - c) <= 0.
std::vector<Vec> clip(const std::vector<Vec>& in, int axis, double c, double sign) {
  std::vector<Vec> out;
  if (in.empty()) return out;
  auto inside = [&](const Vec& p) { return sign * (p[axis] - c) <= 0.0; };
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Vec& cur = in[i];
    const Vec& prev = in[(i + in.size() - 1) % in.size()];
    const bool ci = inside(cur), pi = inside(prev);
    if (ci != pi) {
      const double t = (c - prev[axis]) / (cur[axis] - prev[axis]);
      out.push_back(add(prev, scale(sub(cur, prev), t)));
    }
    if (ci) out.push_back(cur);
  }
  return out;
}

double polygon_box_area(const std::vector<Vec>& poly, const Vec& lo, const Vec& hi) {
  auto p = clip(poly, 0, lo[0], -1.0);
  p = clip(p, 0, hi[0], 1.0);
  p = clip(p, 1, lo[1], -1.0);
  p = clip(p, 1, hi[1], 1.0);
  return std::abs(polygon_area(p));
}

}  // namespace

GridSpec GridSpec::box(int dim, const Vec& lo, const Vec& hi, int nodes, const std::array<char, 6>& faces) {
  GridSpec g;
  g.dim = dim;
  g.lo = lo;
  g.hi = hi;
  g.n = {nodes, nodes, dim == 3 ? nodes : 1};
  g.faces = faces;
  if (dim == 2) {
    g.lo[2] = g.hi[2] = 0.0;
  }
  return g;
}

double GridSpec::max_h() const {
  double m = 0.0;
  for (int a = 0; a < dim; ++a) m = std::max(m, h(a));
  return m;
}

std::array<int, 3> GridSpec::ijk(std::size_t idx) const {
  const int i = static_cast<int>(idx % n[0]);
  const std::size_t r = idx / n[0];
  return {i, static_cast<int>(r % n[1]), static_cast<int>(r / n[1])};
}

Vec GridSpec::node(std::size_t idx) const {
  const auto c = ijk(idx);
  Vec x{0, 0, 0};
  for (int a = 0; a < dim; ++a) x[a] = c[a] == n[a] - 1 ? hi[a] : lo[a] + c[a] * h(a);
  return x;
}

double GridSpec::dual_width(int axis, int i) const {
  if (axis >= dim) return 1.0;
  return (i == 0 || i == n[axis] - 1) ? 0.5 * h(axis) : h(axis);
}

bool GridSpec::is_dirichlet(std::size_t idx) const {
  const auto c = ijk(idx);
  for (int a = 0; a < dim; ++a) {
    if (c[a] == 0 && faces[2 * a] == 'D') return true;
    if (c[a] == n[a] - 1 && faces[2 * a + 1] == 'D') return true;
  }
  return false;
}

std::vector<char> GridSpec::dirichlet_mask() const {
  std::vector<char> m(size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = is_dirichlet(i);
  return m;
}

void GridSpec::validate() const {
  std::vector<std::string> err;
  if (dim != 2 && dim != 3) err.push_back("dim must be 2 or 3");
  for (int a = 0; a < std::min(std::max(dim, 0), 3); ++a) {
    if (!(hi[a] > lo[a])) err.push_back("box has non-positive extent along axis " + std::to_string(a));
    if (n[a] < 3) err.push_back("grid needs at least 3 nodes per axis");
  }
  bool any_d = false;
  for (int f = 0; f < 2 * std::clamp(dim, 0, 3); ++f) {
    if (faces[f] != 'D' && faces[f] != 'N') err.push_back("face labels must be 'D' or 'N'");
    any_d = any_d || faces[f] == 'D';
  }
  if (!any_d) err.push_back("at least one face must be Dirichlet (|Gamma| > 0)");
  if (!err.empty()) throw std::invalid_argument(join(err));
}

bool GridSpec::same_as(const GridSpec& o) const {
  return dim == o.dim && lo == o.lo && hi == o.hi && n == o.n && faces == o.faces;
}

ScalarField::ScalarField(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw std::invalid_argument("field size does not match grid");
}

double ScalarField::interpolate(const Vec& x) const {
  const GridSpec& g = grid;
  std::array<int, 3> i0{0, 0, 0};
  std::array<double, 3> t{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) {
    const double s = (x[a] - g.lo[a]) / g.h(a);
    if (s < -1e-12 || s > g.n[a] - 1 + 1e-12) throw std::out_of_range("interpolation point outside the grid");
    i0[a] = std::clamp(static_cast<int>(std::floor(s)), 0, g.n[a] - 2);
    t[a] = s - i0[a];
  }
  double v = 0.0;
  const int nk = g.dim == 3 ? 2 : 1;
  for (int dk = 0; dk < nk; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) {
        double w = (di ? t[0] : 1 - t[0]) * (dj ? t[1] : 1 - t[1]);
        if (g.dim == 3) w *= dk ? t[2] : 1 - t[2];
        v += w * values[g.index(i0[0] + di, i0[1] + dj, i0[2] + dk)];
      }
  return v;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

ScalarField sample(const GridSpec& g, const std::function<double(const Vec&)>& f) {
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = f(g.node(i));
  return out;
}

ScalarField sample(const GridSpec& g, const Polynomial& p) {
  return sample(g, [&](const Vec& x) { return p(x); });
}

std::vector<double> lumped_mass(const GridSpec& g) {
  std::vector<double> m(g.size());
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i)
        m[g.index(i, j, k)] = g.dual_width(0, i) * g.dual_width(1, j) * g.dual_width(2, k);
  return m;
}

void apply_stiffness(const GridSpec& g, const std::vector<double>& x, std::vector<double>& y) {
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  const std::size_t sy = nx, sz = static_cast<std::size_t>(nx) * ny;
  std::vector<double> wx(nx), wy(ny), wz(nz);
  for (int i = 0; i < nx; ++i) wx[i] = g.dual_width(0, i);
  for (int j = 0; j < ny; ++j) wy[j] = g.dual_width(1, j);
  for (int k = 0; k < nz; ++k) wz[k] = g.dual_width(2, k);
  const double ihx = 1.0 / g.h(0), ihy = 1.0 / g.h(1), ihz = g.dim == 3 ? 1.0 / g.h(2) : 0.0;
  y.assign(x.size(), 0.0);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      const double cx = wy[j] * wz[k] * ihx;
      const std::size_t row = sy * j + sz * k;
      for (int i = 0; i < nx; ++i) {
        const std::size_t p = row + i;
        const double xp = x[p];
        double acc = 0.0;
        if (i > 0) acc += cx * (xp - x[p - 1]);
        if (i < nx - 1) acc += cx * (xp - x[p + 1]);
        const double cy = wx[i] * wz[k] * ihy;
        if (j > 0) acc += cy * (xp - x[p - sy]);
        if (j < ny - 1) acc += cy * (xp - x[p + sy]);
        if (g.dim == 3) {
          const double cz = wx[i] * wy[j] * ihz;
          if (k > 0) acc += cz * (xp - x[p - sz]);
          if (k < nz - 1) acc += cz * (xp - x[p + sz]);
        }
        y[p] = acc;
      }
    }
}

std::vector<double> stiffness_diagonal(const GridSpec& g) {
  std::vector<double> d(g.size());
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const int c[3] = {i, j, k};
        const double w[3] = {g.dual_width(0, i), g.dual_width(1, j), g.dual_width(2, k)};
        double s = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          const int links = (c[a] > 0) + (c[a] < g.n[a] - 1);
          double face = 1.0;
          for (int b = 0; b < g.dim; ++b)
            if (b != a) face *= w[b];
          s += links * face / g.h(a);
        }
        d[g.index(i, j, k)] = s;
      }
  return d;
}

double energy_product(const GridSpec& g, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> kb;
  apply_stiffness(g, b, kb);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * kb[i];
  return s;
}

double integrate_L2_misfit(const ScalarField& u, const Polynomial& u_star) {
  const auto m = lumped_mass(u.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double e = u.values[i] - u_star(u.grid.node(i));
    s += m[i] * e * e;
  }
  return s;
}

double integrate_H1_misfit(const ScalarField& u, const Polynomial& u_star) {
  std::vector<double> e(u.values.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = u.values[i] - u_star(u.grid.node(i));
  return energy_product(u.grid, e, e);
}

PointJet jet_at(const ScalarField& field, const Vec& x0, int order) {
  const GridSpec& g = field.grid;
  const int dim = g.dim;
  if (order < 0) throw std::invalid_argument("jet order must be non-negative");
  const int deg = order + 2;
  const double h = g.max_h();
  const double radius = std::max(4, order + 2) * h;
  for (int a = 0; a < dim; ++a)
    if (x0[a] - radius < g.lo[a] - 1e-12 || x0[a] + radius > g.hi[a] + 1e-12)
      throw std::invalid_argument("jet stencil leaves the domain");
  std::array<int, 3> lo, hi;
  Vec blo{0, 0, 0}, bhi{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    blo[a] = x0[a] - radius;
    bhi[a] = x0[a] + radius;
  }
  node_range(g, blo, bhi, lo, hi);
  std::vector<std::size_t> nodes;
  for (int k = lo[2]; k <= hi[2]; ++k)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int i = lo[0]; i <= hi[0]; ++i) {
        const std::size_t p = g.index(i, j, k);
        if (norm(sub(g.node(p), x0), dim) <= radius * (1 + 1e-12)) nodes.push_back(p);
      }
  const auto basis = multi_indices(dim, deg);
  if (nodes.size() < basis.size()) throw std::runtime_error("jet stencil too small for the fit degree");
  Eigen::MatrixXd A(nodes.size(), basis.size());
  Eigen::VectorXd b(nodes.size());
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    const Vec y = scale(sub(g.node(nodes[r]), x0), 1.0 / h);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      double v = 1.0;
      for (int a = 0; a < dim; ++a) v *= std::pow(y[a], basis[c][a]);
      A(r, c) = v;
    }
    b(r) = field.values[nodes[r]];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < static_cast<Eigen::Index>(basis.size())) throw std::runtime_error("rank-deficient jet fit");
  const Eigen::VectorXd c = qr.solve(b);
  PointJet jet;
  jet.x0 = x0;
  jet.order = order;
  jet.poly = Polynomial(dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int d = total_degree(basis[i]);
    if (d <= order) jet.poly.add_term(basis[i], c(i) / std::pow(h, d));
  }
  jet.fit_residual = (A * c - b).cwiseAbs().maxCoeff();
  return jet;
}

double disc_rect_area(double r, double x0, double x1, double y0, double y1) {
  if (r <= 0.0) return 0.0;
  x0 = std::max(x0, -r);
  x1 = std::min(x1, r);
  if (!(x1 > x0) || !(y1 > y0)) return 0.0;
  auto S = [r](double x) {
    const double xc = std::clamp(x / r, -1.0, 1.0);
    return 0.5 * (x * std::sqrt(std::max(r * r - x * x, 0.0)) + r * r * std::asin(xc));
  };
  std::vector<double> br{x0, x1};
  for (double y : {y0, y1})
    if (std::abs(y) < r) {
      const double c = std::sqrt(r * r - y * y);
      for (double x : {-c, c})
        if (x > x0 && x < x1) br.push_back(x);
    }
  std::sort(br.begin(), br.end());
  double area = 0.0;
  for (std::size_t p = 0; p + 1 < br.size(); ++p) {
    const double a = br[p], b = br[p + 1];
    if (!(b > a)) continue;
    const double m = 0.5 * (a + b), s = std::sqrt(std::max(r * r - m * m, 0.0));
    const double up = std::min(y1, s), dn = std::max(y0, -s);
    if (up <= dn) continue;
    const double iu = s <= y1 ? S(b) - S(a) : y1 * (b - a);
    const double id = -s >= y0 ? -(S(b) - S(a)) : y0 * (b - a);
    area += iu - id;
  }
  return area;
}

double ball_box_volume(double r, const Vec& lo, const Vec& hi) {
  const double z0 = std::max(lo[2], -r), z1 = std::min(hi[2], r);
  if (!(z1 > z0)) return 0.0;
  std::vector<double> crit;
  for (double x : {lo[0], hi[0]}) crit.push_back(std::abs(x));
  for (double y : {lo[1], hi[1]}) crit.push_back(std::abs(y));
  for (double x : {lo[0], hi[0]})
    for (double y : {lo[1], hi[1]}) crit.push_back(std::hypot(x, y));
  std::vector<double> br{z0, z1, 0.0};
  for (double c : crit)
    if (c < r) {
      const double z = std::sqrt(r * r - c * c);
      br.push_back(z);
      br.push_back(-z);
    }
  std::sort(br.begin(), br.end());
  br.erase(std::remove_if(br.begin(), br.end(), [&](double z) { return z < z0 || z > z1; }), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  auto slice = [&](double z) {
    return disc_rect_area(std::sqrt(std::max(r * r - z * z, 0.0)), lo[0], hi[0], lo[1], hi[1]);
  };
  return composite_gauss(br, 12, slice);
}

ScalarField char_fraction(const GridSpec& g, const Vec& x0, double eps, const InclusionShape& shape) {
  if (shape.dim != g.dim) throw std::invalid_argument("shape and grid dimensions differ");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double R = eps * shape.outer_radius();
  Vec blo{0, 0, 0}, bhi{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) {
    blo[a] = x0[a] - R;
    bhi[a] = x0[a] + R;
    if (blo[a] <= g.lo[a] || bhi[a] >= g.hi[a]) throw std::invalid_argument("inclusion touches the domain boundary");
  }
  ScalarField chi(g);
  std::array<int, 3> a, b;
  node_range(g, blo, bhi, a, b);
  std::vector<Vec> poly;
  if (shape.kind == InclusionShape::Kind::Polygon)
    for (const auto& v : shape.vertices) poly.push_back(add(x0, scale(v, eps)));
  for (int k = a[2]; k <= b[2]; ++k)
    for (int j = a[1]; j <= b[1]; ++j)
      for (int i = a[0]; i <= b[0]; ++i) {
        Vec lo, hi;
        dual_cell(g, {i, j, k}, lo, hi);
        double vol = 1.0;
        for (int ax = 0; ax < g.dim; ++ax) vol *= hi[ax] - lo[ax];
        double covered = 0.0;
        if (shape.kind == InclusionShape::Kind::Ball) {
          const Vec l = sub(lo, x0), u = sub(hi, x0);
          covered = g.dim == 2 ? disc_rect_area(eps, l[0], u[0], l[1], u[1]) : ball_box_volume(eps, l, u);
        } else if (shape.kind == InclusionShape::Kind::Polygon) {
          covered = polygon_box_area(poly, lo, hi);
        } else {
          // stratified midpoint samples
          const int m = kFractionSamples;
          int hits = 0;
          for (int s = 0; s < m; ++s)
            for (int t = 0; t < m; ++t)
              for (int q = 0; q < m; ++q) {
                Vec p{lo[0] + (s + 0.5) / m * (hi[0] - lo[0]), lo[1] + (t + 0.5) / m * (hi[1] - lo[1]),
                      lo[2] + (q + 0.5) / m * (hi[2] - lo[2])};
                hits += shape.contains(scale(sub(p, x0), 1.0 / eps));
              }
          covered = vol * hits / (m * m * m);
        }
        chi.values[g.index(i, j, k)] = std::clamp(covered / vol, 0.0, 1.0);
      }
  return chi;
}

ScalarField box_fraction(const GridSpec& g, const Vec& lo, const Vec& hi) {
  ScalarField chi(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    Vec cl, ch;
    dual_cell(g, g.ijk(p), cl, ch);
    double frac = 1.0;
    for (int a = 0; a < g.dim; ++a) {
      const double w = ch[a] - cl[a];
      frac *= std::max(0.0, std::min(ch[a], hi[a]) - std::max(cl[a], lo[a])) / w;
    }
    chi.values[p] = frac;
  }
  return chi;
}

void write_field(const std::string& stem, const ScalarField& f, const std::string& label) {
  nlohmann::json hdr;
  hdr["label"] = label;
  hdr["dim"] = f.grid.dim;
  hdr["nodes"] = std::vector<int>(f.grid.n.begin(), f.grid.n.begin() + f.grid.dim);
  std::vector<double> sp, lo, hi;
  for (int a = 0; a < f.grid.dim; ++a) {
    sp.push_back(f.grid.h(a));
    lo.push_back(f.grid.lo[a]);
    hi.push_back(f.grid.hi[a]);
  }
  hdr["spacing"] = sp;
  hdr["lo"] = lo;
  hdr["hi"] = hi;
  hdr["faces"] = std::string(f.grid.faces.begin(), f.grid.faces.begin() + 2 * f.grid.dim);
  hdr["order"] = "x fastest";
  hdr["values"] = stem.substr(stem.find_last_of('/') + 1) + ".csv";
  write_text(stem + ".json", dump_json(hdr));
  std::FILE* fp = std::fopen((stem + ".csv").c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + stem + ".csv");
  for (double v : f.values) std::fprintf(fp, "%.17g\n", v);
  std::fclose(fp);
}

}  // namespace topoderiv
