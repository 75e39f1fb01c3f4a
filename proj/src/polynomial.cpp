#include "topoderiv/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace topoderiv {

double dot(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a, int dim) { return std::sqrt(dot(a, a, dim)); }

Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec scale(const Vec& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

int total_degree(const Exponent& e) { return e[0] + e[1] + e[2]; }

std::vector<Exponent> multi_indices_exact(int dim, int degree) {
  std::vector<Exponent> out;
  if (degree < 0) return out;
  if (dim == 2) {
    for (int a = degree; a >= 0; --a) out.push_back({a, degree - a, 0});
  } else {
    for (int a = degree; a >= 0; --a)
      for (int b = degree - a; b >= 0; --b) out.push_back({a, b, degree - a - b});
  }
  return out;
}

std::vector<Exponent> multi_indices(int dim, int max_degree) {
  std::vector<Exponent> out;
  for (int n = 0; n <= max_degree; ++n) {
    auto level = multi_indices_exact(dim, n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  p.add_term({0, 0, 0}, c);
  return p;
}

Polynomial Polynomial::monomial(int dim, const Exponent& e, double c) {
  Polynomial p(dim);
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::coordinate(int dim, int axis) {
  Exponent e{0, 0, 0};
  e[axis] = 1;
  return monomial(dim, e);
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

bool Polynomial::is_homogeneous() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    if (d < 0) d = total_degree(e);
    else if (total_degree(e) != d) return false;
  }
  return true;
}

double Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (c == 0.0) return;
  if (dim_ == 2 && e[2] != 0) throw std::invalid_argument("third exponent in a 2-d polynomial");
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::operator()(const Vec& x) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) m *= x[i];
    s += m;
  }
  return s;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial d(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    Exponent f = e;
    f[axis] -= 1;
    d.add_term(f, c * e[axis]);
  }
  return d;
}

Polynomial Polynomial::shifted(const Vec& origin) const {
  // (o_i + y_i)^a expanded binomially per axis.
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    Polynomial prod = Polynomial::constant(dim_, c);
    for (int i = 0; i < dim_; ++i) {
      if (e[i] == 0) continue;
      Polynomial factor(dim_);
      for (int k = 0; k <= e[i]; ++k) {
        Exponent f{0, 0, 0};
        f[i] = k;
        factor.add_term(f, binomial(e[i], k) * std::pow(origin[i], e[i] - k));
      }
      prod = prod * factor;
    }
    out += prod;
  }
  return out;
}

Polynomial Polynomial::homogeneous_part(int degree) const {
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) == degree) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::truncated(int max_degree) const {
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) <= max_degree) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::pow(int n) const {
  Polynomial r = Polynomial::constant(dim_, 1.0);
  for (int i = 0; i < n; ++i) r = r * (*this);
  return r;
}

std::vector<double> Polynomial::along_ray(const Vec& x, const Vec& q) const {
  const int deg = std::max(degree(), 0);
  std::vector<double> out(deg + 1, 0.0);
  std::vector<double> acc, axis_poly, tmp;
  for (const auto& [e, c] : terms_) {
    acc.assign(1, c);
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < e[i]; ++k) {
        // multiply by (x_i + s q_i)
        tmp.assign(acc.size() + 1, 0.0);
        for (std::size_t m = 0; m < acc.size(); ++m) {
          tmp[m] += acc[m] * x[i];
          tmp[m + 1] += acc[m] * q[i];
        }
        acc.swap(tmp);
      }
    }
    for (std::size_t m = 0; m < acc.size(); ++m) out[m] += acc[m];
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.dim());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms())
      r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
  return r;
}

Polynomial dot_power(const Vec& x, int i, int dim) {
  Polynomial lin(dim);
  for (int a = 0; a < dim; ++a) {
    Exponent e{0, 0, 0};
    e[a] = 1;
    lin.add_term(e, x[a]);
  }
  return lin.pow(i);
}

Polynomial norm2_power(int j, int dim) {
  Polynomial r2(dim);
  for (int a = 0; a < dim; ++a) {
    Exponent e{0, 0, 0};
    e[a] = 2;
    r2.add_term(e, 1.0);
  }
  return r2.pow(j);
}

}  // namespace topoderiv
