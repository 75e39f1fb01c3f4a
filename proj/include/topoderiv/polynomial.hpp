#pragma once

#include <array>
#include <map>
#include <vector>

namespace topoderiv {

/// Point in R^d, unused trailing components are zero.
using Vec = std::array<double, 3>;
using Exponent = std::array<int, 3>;

double dot(const Vec& a, const Vec& b, int dim);
double norm(const Vec& a, int dim);
Vec sub(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec scale(const Vec& a, double s);

int total_degree(const Exponent& e);

/// All exponents of total degree <= max_degree in dim variables, ordered by
/// degree and then lexicographically.
std::vector<Exponent> multi_indices(int dim, int max_degree);
/// Exponents of total degree exactly `degree`.
std::vector<Exponent> multi_indices_exact(int dim, int degree);

double factorial(int n);
double binomial(int n, int k);

/// Sparse multivariate polynomial in 2 or 3 variables.
class Polynomial {
 public:
  explicit Polynomial(int dim = 2) : dim_(dim) {}

  static Polynomial constant(int dim, double c);
  static Polynomial monomial(int dim, const Exponent& e, double c = 1.0);
  static Polynomial coordinate(int dim, int axis);

  int dim() const { return dim_; }
  /// -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous() const;
  const std::map<Exponent, double>& terms() const { return terms_; }
  double coefficient(const Exponent& e) const;

  void add_term(const Exponent& e, double c);

  double operator()(const Vec& x) const;
  Polynomial derivative(int axis) const;
  /// q(y) = p(origin + y).
  Polynomial shifted(const Vec& origin) const;
  Polynomial homogeneous_part(int degree) const;
  Polynomial truncated(int max_degree) const;
  Polynomial pow(int n) const;

  /// Coefficients c_m of s -> p(x + s*q), lowest power first.
  std::vector<double> along_ray(const Vec& x, const Vec& q) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  int dim_;
  std::map<Exponent, double> terms_;
};

/// (x.y)^i as a polynomial in y for a fixed x.
Polynomial dot_power(const Vec& x, int i, int dim);
/// |y|^(2j) as a polynomial in y.
Polynomial norm2_power(int j, int dim);

}  // namespace topoderiv
