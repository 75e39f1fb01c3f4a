#include "topoderiv/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "topoderiv/quadrature.hpp"

namespace topoderiv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelPoints = 20;

// Antiderivatives of r^p and r^p ln r.
double pow_anti(int p, double r) { return std::pow(r, p + 1) / (p + 1); }
double log_anti(int p, double r) {
  if (r == 0.0) return 0.0;
  const double q = p + 1;
  return std::pow(r, q) * (std::log(r) / q - 1.0 / (q * q));
}

// int_{r1}^{r2} K(rho) rho^(dim-1) sum_m c_m rho^m drho
double radial_integral(KernelKind kind, int dim, const std::vector<double>& c, double r1, double r2) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    const int m = static_cast<int>(i);
    double g;
    if (kind == KernelKind::Laplace) {
      if (dim == 2)
        g = -(log_anti(1 + m, r2) - log_anti(1 + m, r1)) / (2 * kPi);
      else
        g = (pow_anti(1 + m, r2) - pow_anti(1 + m, r1)) / (4 * kPi);
    } else {
      if (dim == 2)
        g = (log_anti(3 + m, r2) - log_anti(3 + m, r1) - pow_anti(3 + m, r2) + pow_anti(3 + m, r1)) / (8 * kPi);
      else
        g = -(pow_anti(3 + m, r2) - pow_anti(3 + m, r1)) / (8 * kPi);
    }
    s += c[i] * g;
  }
  return s;
}

Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Orthonormal frame {e, e1, e2} with e along x (or the z axis at the origin).
std::array<Vec, 3> frame3(const Vec& x) {
  const double r = norm(x, 3);
  Vec e = r > 0 ? scale(x, 1.0 / r) : Vec{0, 0, 1};
  Vec t = std::abs(e[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
  Vec e1 = sub(t, scale(e, dot(t, e, 3)));
  e1 = scale(e1, 1.0 / norm(e1, 3));
  return {e, e1, cross(e, e1)};
}

std::vector<double> merge(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<double> uniform(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(a + (b - a) * i / n);
  return out;
}

}  // namespace

PotentialEvaluator::PotentialEvaluator(InclusionShape shape, Polynomial density, KernelKind kind, double prefactor)
    : shape_(std::move(shape)), density_(std::move(density)), kind_(kind), prefactor_(prefactor) {
  if (density_.dim() != shape_.dim) throw std::invalid_argument("density and shape dimensions differ");
  if (shape_.kind == InclusionShape::Kind::TetMesh) faces_ = outward_boundary_faces(shape_);
}

double PotentialEvaluator::ray(const Vec& x, const Vec& dir, double r1, double r2) const {
  return radial_integral(kind_, shape_.dim, density_.along_ray(x, dir), r1, r2);
}

double PotentialEvaluator::operator()(const Vec& x) const {
  if (density_.is_zero()) return 0.0;
  const double R = shape_.outer_radius();
  double v;
  if (norm(x, shape_.dim) > 2.0 * R) {
    // well separated: the integrand is smooth on omega
    const int d = shape_.dim;
    auto g = [&](const Vec& y) {
      const Vec z = sub(x, y);
      const double k = kind_ == KernelKind::Laplace ? laplace_fundamental(z, d) : biharmonic_fundamental(z, d);
      return k * density_(y);
    };
    v = integrate_over_shape(shape_, g, 40 + density_.degree());
  } else if (shape_.kind == InclusionShape::Kind::Ball) {
    v = shape_.dim == 2 ? ball2(x) : ball3(x);
  } else if (shape_.kind == InclusionShape::Kind::Polygon) {
    v = polygon(x);
  } else {
    v = tets(x);
  }
  return prefactor_ * v;
}

double PotentialEvaluator::ball2(const Vec& x) const {
  const double r = norm(x, 2);
  const Vec e = r > 0 ? Vec{x[0] / r, x[1] / r, 0} : Vec{1, 0, 0};
  const Vec p{-e[1], e[0], 0};
  if (r < 1.0) {
    const double c = std::max(1.0 - r * r, 0.0);
    const double delta = r > 0 ? std::sqrt(c) / r : 1.0;
    auto f = [&](double phi) {
      const double cs = std::cos(phi), sn = std::sin(phi);
      const double rho = -r * cs + std::sqrt(std::max(r * r * cs * cs + c, 0.0));
      return ray(x, add(scale(e, cs), scale(p, sn)), 0.0, rho);
    };
    auto br = merge(graded_breakpoints(0, kPi, kPi / 2, delta), graded_breakpoints(kPi, 2 * kPi, 1.5 * kPi, delta));
    br = merge(br, uniform(0, 2 * kPi, 8));
    return composite_gauss(br, kPanelPoints, f);
  }
  // outside: parametrize the visible chords by psi with sin(psi) = r sin(phi)
  const double delta = std::max(std::sqrt(2.0 * (r - 1.0)), 1e-12);
  auto f = [&](double psi) {
    const double s = std::sin(psi), cp = std::cos(psi);
    const double A = std::sqrt((r - 1.0) * (r + 1.0) + cp * cp);
    const double sphi = s / r, cphi = A / r;
    const Vec dir = add(scale(e, -cphi), scale(p, sphi));
    return ray(x, dir, std::max(A - cp, 0.0), A + cp) * cp / A;
  };
  auto br = merge(graded_breakpoints(-kPi / 2, 0, -kPi / 2, delta), graded_breakpoints(0, kPi / 2, kPi / 2, delta));
  br = merge(br, uniform(-kPi / 2, kPi / 2, 4));
  return composite_gauss(br, kPanelPoints, f);
}

double PotentialEvaluator::ball3(const Vec& x) const {
  const double r = norm(x, 3);
  const auto [e, e1, e2] = frame3(x);
  const int nphi = 2 * std::max(density_.degree(), 0) + 4;
  auto sphere_dir = [&](const Vec& axis, double cb, double sb, double phi) {
    return add(scale(axis, cb), add(scale(e1, sb * std::cos(phi)), scale(e2, sb * std::sin(phi))));
  };
  if (r < 1.0) {
    const double c = std::max(1.0 - r * r, 0.0);
    const double delta = r > 0 ? std::sqrt(c) / r : 1.0;
    auto f = [&](double mu) {
      const double rho = -r * mu + std::sqrt(std::max(r * r * mu * mu + c, 0.0));
      const double sb = std::sqrt(std::max(1.0 - mu * mu, 0.0));
      double s = 0.0;
      for (int j = 0; j < nphi; ++j) s += ray(x, sphere_dir(e, mu, sb, 2 * kPi * j / nphi), 0.0, rho);
      return s * 2 * kPi / nphi;
    };
    auto br = merge(graded_breakpoints(-1, 1, 0, delta), uniform(-1, 1, 4));
    return composite_gauss(br, kPanelPoints, f);
  }
  const double delta = std::max(std::sqrt(2.0 * (r - 1.0)), 1e-12);
  const Vec axis = scale(e, -1.0);
  auto f = [&](double psi) {
    const double s = std::sin(psi), cp = std::cos(psi);
    const double A = std::sqrt((r - 1.0) * (r + 1.0) + cp * cp);
    const double sb = s / r, cb = A / r;
    double acc = 0.0;
    for (int j = 0; j < nphi; ++j) acc += ray(x, sphere_dir(axis, cb, sb, 2 * kPi * j / nphi), std::max(A - cp, 0.0), A + cp);
    return acc * 2 * kPi / nphi * s * cp / (r * A);
  };
  auto br = merge(graded_breakpoints(0, kPi / 2, kPi / 2, delta), uniform(0, kPi / 2, 3));
  return composite_gauss(br, kPanelPoints, f);
}

double PotentialEvaluator::polygon(const Vec& x) const {
  const auto& v = shape_.vertices;
  const std::size_t n = v.size();
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& a = v[i];
    const Vec& b = v[(i + 1) % n];
    area2 += a[0] * b[1] - a[1] * b[0];
  }
  const double orient = area2 > 0 ? 1.0 : -1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec a0 = sub(v[i], x);
    const Vec ed = sub(v[(i + 1) % n], v[i]);
    const double D = a0[0] * ed[1] - a0[1] * ed[0];
    if (D == 0.0) continue;
    const double L2 = dot(ed, ed, 2);
    const double tstar = -dot(a0, ed, 2) / L2;
    const double scl = std::abs(D) / L2;
    auto f = [&](double t) {
      const Vec q = add(a0, scale(ed, t));
      const double rq = norm(q, 2);
      return D / (rq * rq) * ray(x, scale(q, 1.0 / rq), 0.0, rq);
    };
    total += composite_gauss(graded_breakpoints(0, 1, tstar, scl), kPanelPoints, f);
  }
  return orient * total;
}

double PotentialEvaluator::tets(const Vec& x) const {
  const auto& V = shape_.vertices;
  double total = 0.0;
  constexpr int nq = 16;
  for (const auto& f : faces_) {
    const Vec& a = V[f[0]];
    const Vec& b = V[f[1]];
    const Vec& c = V[f[2]];
    Vec nrm = cross(sub(b, a), sub(c, a));
    const double nn = norm(nrm, 3);
    if (nn == 0.0) continue;
    nrm = scale(nrm, 1.0 / nn);
    const double h = dot(sub(a, x), nrm, 3);
    if (h == 0.0) continue;
    const Vec foot = add(x, scale(nrm, h));
    const Vec px = sub(foot, x);
    const Vec corners[3] = {a, b, c};
    for (int s = 0; s < 3; ++s) {
      const Vec B = sub(corners[s], foot), C = sub(corners[(s + 1) % 3], foot);
      const double w0 = dot(px, cross(B, C), 3);
      if (w0 == 0.0) continue;
      const Vec BC = sub(C, B);
      const double lbc2 = dot(BC, BC, 3);
      const double vstar = -dot(B, BC, 3) / lbc2;
      const double dline = norm(cross(B, BC), 3) / std::sqrt(lbc2);
      const double size = std::max(norm(B, 3), norm(C, 3));
      auto inner = [&](double u) {
        auto g = [&](double vv) {
          const Vec q = add(px, scale(add(B, scale(BC, vv)), u));
          const double rq = norm(q, 3);
          return u * w0 / (rq * rq * rq) * ray(x, scale(q, 1.0 / rq), 0.0, rq);
        };
        const double sv = std::hypot(h, u * dline) / (u * std::sqrt(lbc2));
        return composite_gauss(graded_breakpoints(0, 1, vstar, sv), nq, g);
      };
      total += composite_gauss(graded_breakpoints(0, 1, 0, std::abs(h) / size), nq, inner);
    }
  }
  return total;
}

PotentialEvaluator newton_potential(int k, const DataJet& jet, const InclusionShape& shape) {
  return PotentialEvaluator(shape, F_polynomial(k, jet), KernelKind::Laplace, 1.0);
}

PotentialEvaluator biharmonic_potential(int k, const DataJet& jet, const InclusionShape& shape, double alpha1) {
  return PotentialEvaluator(shape, F_polynomial(k, jet), KernelKind::Biharmonic, -alpha1);
}

double eval_U(int k, const Vec& x, const DataJet& jet, const InclusionShape& shape) {
  return newton_potential(k, jet, shape)(x);
}

double eval_P(int k, const Vec& x, const DataJet& jet, const InclusionShape& shape, double alpha1) {
  return biharmonic_potential(k, jet, shape, alpha1)(x);
}

double ball_U2_closed(const Vec& x, int dim, double f_jump) {
  const double r = norm(x, dim);
  if (dim == 2) return r < 1.0 ? -f_jump * (r * r - 1.0) / 4.0 : -f_jump * std::log(r) / 2.0;
  return r < 1.0 ? -f_jump * (r * r - 3.0) / 6.0 : f_jump / (3.0 * r);
}

double farfield_remainder(int k, int N, const Vec& x, const DataJet& jet, const InclusionShape& shape,
                          const MomentTable& moments) {
  if (norm(x, shape.dim) <= shape.outer_radius())
    throw std::domain_error("far-field remainder needs |x| > outer radius of omega");
  double rem = eval_U(k, x, jet, shape);
  for (int l = 1; l <= N; ++l) rem -= multipole_R(k, l, jet, moments)(x);
  return rem;
}

double integrate_over_shape(const InclusionShape& shape, const std::function<double(const Vec&)>& g, int degree) {
  const int n = std::clamp(degree / 2 + 2, 2, kMaxGaussPoints);
  const GaussRule& q = gauss_rule(n);
  auto unit = [&](int i) { return 0.5 * (q.x[i] + 1.0); };
  auto wt = [&](int i) { return 0.5 * q.w[i]; };
  double total = 0.0;
  if (shape.kind == InclusionShape::Kind::Ball) {
    const int nt = std::max(degree + 2, 8);
    if (shape.dim == 2) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < nt; ++j) {
          const double r = unit(i), t = 2 * kPi * j / nt;
          total += wt(i) * r * g({r * std::cos(t), r * std::sin(t), 0});
        }
      return total * 2 * kPi / nt;
    }
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a)
        for (int j = 0; j < nt; ++j) {
          const double r = unit(i), mu = q.x[a], sb = std::sqrt(1 - mu * mu), t = 2 * kPi * j / nt;
          total += wt(i) * q.w[a] * r * r * g({r * sb * std::cos(t), r * sb * std::sin(t), r * mu});
        }
    return total * 2 * kPi / nt;
  }
  if (shape.kind == InclusionShape::Kind::Polygon) {
    const auto& v = shape.vertices;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      const Vec A = v[0], AB = sub(v[k], A), BC = sub(v[k + 1], v[k]);
      const double det = AB[0] * BC[1] - AB[1] * BC[0];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double u = unit(i), s = unit(j);
          total += wt(i) * wt(j) * u * det * g(add(A, scale(add(AB, scale(BC, s)), u)));
        }
    }
    return total;
  }
  const auto& V = shape.vertices;
  for (const auto& t : shape.tets) {
    const Vec A = V[t[0]], AB = sub(V[t[1]], A), BC = sub(V[t[2]], V[t[1]]), CD = sub(V[t[3]], V[t[2]]);
    const double det = std::abs(dot(AB, cross(BC, CD), 3));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const double u = unit(i), s = unit(j), w = unit(l);
          const Vec y = add(A, scale(add(AB, scale(add(BC, scale(CD, w)), s)), u));
          total += wt(i) * wt(j) * wt(l) * u * u * s * det * g(y);
        }
  }
  return total;
}

}  // namespace topoderiv
