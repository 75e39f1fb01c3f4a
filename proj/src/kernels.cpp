#include "topoderiv/kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace topoderiv {

namespace {

constexpr double kPi = std::numbers::pi;

// K(x - t y) is written as pref * |x|^r_pow * [ln|x|] * g(u) with
// |x - t y|^2 = |x|^2 (1 + u), u = (-2 x.y t + |y|^2 t^2)/|x|^2, and g a power
// series in u with coefficients series[n].
struct KernelPart {
  double pref;
  int r_pow;
  bool log;
  std::array<double, kMaxKernelOrder + 1> series;
};

std::array<double, kMaxKernelOrder + 1> binomial_series(double a) {
  std::array<double, kMaxKernelOrder + 1> g{};
  g[0] = 1.0;
  for (int n = 1; n <= kMaxKernelOrder; ++n) g[n] = g[n - 1] * (a - (n - 1)) / n;
  return g;
}

std::vector<KernelPart> kernel_parts(KernelKind kind, int dim) {
  std::array<double, kMaxKernelOrder + 1> one_plus_u{};
  one_plus_u[0] = 1.0;
  one_plus_u[1] = 1.0;
  if (kind == KernelKind::Laplace) {
    if (dim == 3) return {{1.0 / (4 * kPi), -1, false, binomial_series(-0.5)}};
    std::array<double, kMaxKernelOrder + 1> log_series{}, unit{};
    unit[0] = 1.0;
    for (int n = 1; n <= kMaxKernelOrder; ++n) log_series[n] = (n % 2 ? 1.0 : -1.0) / n;
    return {{-1.0 / (2 * kPi), 0, true, unit}, {-1.0 / (4 * kPi), 0, false, log_series}};
  }
  if (dim == 3) return {{-1.0 / (8 * kPi), 1, false, binomial_series(0.5)}};
  // (1+u) ln(1+u) = u + sum_{n>=2} (-1)^n u^n / (n (n-1))
  std::array<double, kMaxKernelOrder + 1> xlogx{};
  xlogx[1] = 1.0;
  for (int n = 2; n <= kMaxKernelOrder; ++n) xlogx[n] = (n % 2 ? -1.0 : 1.0) / (n * (n - 1.0));
  return {{1.0 / (8 * kPi), 2, true, one_plus_u},
          {1.0 / (16 * kPi), 2, false, xlogx},
          {-1.0 / (8 * kPi), 2, false, one_plus_u}};
}

void check_order(int order) {
  if (order < 0 || order > kMaxKernelOrder)
    throw std::domain_error("kernel Taylor order " + std::to_string(order) + " unsupported (0.." +
                            std::to_string(kMaxKernelOrder) + ")");
}

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dimension must be 2 or 3");
}

double multinomial(const Exponent& a) {
  double r = factorial(total_degree(a));
  for (int v : a) r /= factorial(v);
  return r;
}

}  // namespace

double laplace_fundamental(const Vec& x, int dim) {
  check_dim(dim);
  double r = norm(x, dim);
  if (r == 0.0) throw std::domain_error("Laplace fundamental solution is singular at 0");
  return dim == 2 ? -std::log(r) / (2 * kPi) : 1.0 / (4 * kPi * r);
}

double biharmonic_fundamental(const Vec& x, int dim) {
  check_dim(dim);
  double r = norm(x, dim);
  if (dim == 3) return -r / (8 * kPi);
  if (r == 0.0) throw std::domain_error("biharmonic fundamental solution is undefined at 0 in 2-d");
  return (r * r * std::log(r) - r * r) / (8 * kPi);
}

double kernel_taylor_term(KernelKind kind, int order, const Vec& x, const Vec& y, int dim) {
  check_dim(dim);
  check_order(order);
  const double a = dot(x, x, dim);
  if (a == 0.0) throw std::domain_error("kernel Taylor term requires x != 0");
  const double xy = dot(x, y, dim), y2 = dot(y, y, dim);
  const double r = std::sqrt(a), lr = std::log(r);
  const int m = order;
  double total = 0.0;
  for (const auto& part : kernel_parts(kind, dim)) {
    double s = 0.0;
    for (int n = (m + 1) / 2; n <= m; ++n) {
      const int i = 2 * n - m, j = m - n;
      const double g = part.series[n];
      if (g == 0.0) continue;
      s += g * binomial(n, i) * std::pow(-2.0 * xy, i) * std::pow(y2, j) * std::pow(a, -n);
    }
    total += part.pref * std::pow(r, part.r_pow) * (part.log ? lr : 1.0) * s;
  }
  return total;
}

std::string MultipoleTerm::name() const {
  return std::string(1, label_) + "_" + std::to_string(index_) + "^(" + std::to_string(source_order_) + ")";
}

void MultipoleTerm::add_piece(int r_pow, bool log, const Polynomial& q) {
  for (auto& p : pieces_) {
    if (p.r_pow == r_pow && p.log == log) {
      p.q += q;
      if (p.q.is_zero()) {
        std::erase_if(pieces_, [](const MultipolePiece& z) { return z.q.is_zero(); });
      }
      return;
    }
  }
  if (q.is_zero()) return;
  pieces_.push_back({r_pow, log, q});
}

bool MultipoleTerm::has_log() const {
  for (const auto& p : pieces_)
    if (p.log) return true;
  return false;
}

int MultipoleTerm::degree() const {
  if (pieces_.empty()) return 0;
  return pieces_.front().r_pow + pieces_.front().q.degree();
}

double MultipoleTerm::operator()(const Vec& x) const {
  if (pieces_.empty()) return 0.0;
  const double r = norm(x, dim_);
  if (r == 0.0) throw std::domain_error("multipole term evaluated at the origin");
  const double lr = std::log(r);
  double s = 0.0;
  for (const auto& p : pieces_) s += std::pow(r, p.r_pow) * p.q(x) * (p.log ? lr : 1.0);
  return s;
}

Vec MultipoleTerm::gradient(const Vec& x) const {
  Vec g{0, 0, 0};
  if (pieces_.empty()) return g;
  const double r = norm(x, dim_);
  if (r == 0.0) throw std::domain_error("multipole term evaluated at the origin");
  const double lr = std::log(r);
  for (const auto& p : pieces_) {
    const double rp = std::pow(r, p.r_pow), rp2 = std::pow(r, p.r_pow - 2);
    const double qv = p.q(x), L = p.log ? lr : 1.0;
    for (int a = 0; a < dim_; ++a) {
      double dq = p.q.derivative(a)(x);
      double v = p.r_pow * rp2 * x[a] * qv * L + rp * dq * L;
      if (p.log) v += rp2 * x[a] * qv;
      g[a] += v;
    }
  }
  return g;
}

MultipoleTerm MultipoleTerm::companion() const {
  MultipoleTerm t(dim_, label_, index_, source_order_);
  for (const auto& p : pieces_)
    if (p.log) t.add_piece(p.r_pow, false, p.q);
  return t;
}

MultipoleTerm MultipoleTerm::log_coefficient() const { return companion(); }

MultipoleTerm MultipoleTerm::non_log_part() const {
  MultipoleTerm t(dim_, label_, index_, source_order_);
  for (const auto& p : pieces_)
    if (!p.log) t.add_piece(p.r_pow, false, p.q);
  return t;
}

MultipoleTerm MultipoleTerm::scaled(double s) const {
  MultipoleTerm t(dim_, label_, index_, source_order_);
  if (s == 0.0) return t;
  for (const auto& p : pieces_) t.add_piece(p.r_pow, p.log, p.q * s);
  return t;
}

MultipoleTerm MultipoleTerm::relabeled(char label, int index, int source_order) const {
  MultipoleTerm t = *this;
  t.label_ = label;
  t.index_ = index;
  t.source_order_ = source_order;
  return t;
}

double eval_sum(const std::vector<MultipoleTerm>& terms, const Vec& x) {
  double s = 0.0;
  for (const auto& t : terms) s += t(x);
  return s;
}

Vec gradient_sum(const std::vector<MultipoleTerm>& terms, const Vec& x) {
  Vec g{0, 0, 0};
  for (const auto& t : terms) g = add(g, t.gradient(x));
  return g;
}

MultipoleTerm kernel_moment_term(KernelKind kind, int order, const Polynomial& density,
                                 const MomentTable& moments) {
  const int dim = moments.dim;
  check_dim(dim);
  check_order(order);
  MultipoleTerm term(dim, kind == KernelKind::Laplace ? 'R' : 'S', order, 0);
  if (density.is_zero()) return term;
  const int need = density.degree() + order;
  if (need > moments.n_max)
    throw std::out_of_range("moments up to degree " + std::to_string(need) + " required, table has " +
                            std::to_string(moments.n_max));
  const int m = order;
  for (const auto& part : kernel_parts(kind, dim)) {
    for (int n = (m + 1) / 2; n <= m; ++n) {
      const int i = 2 * n - m, j = m - n;
      const double g = part.series[n];
      if (g == 0.0) continue;
      const double c = part.pref * g * binomial(n, i) * std::pow(-2.0, i);
      const Polynomial weight = norm2_power(j, dim) * density;
      Polynomial q(dim);
      for (const auto& alpha : multi_indices_exact(dim, i)) {
        double mom = weighted_moment(moments, Polynomial::monomial(dim, alpha) * weight);
        q.add_term(alpha, c * multinomial(alpha) * mom);
      }
      term.add_piece(part.r_pow - 2 * n, part.log, q);
    }
  }
  return term;
}

MultipoleTerm multipole_R(int k, int ell, const DataJet& jet, const MomentTable& moments) {
  if (k < 1 || ell < 1) throw std::invalid_argument("multipole_R requires k >= 1 and ell >= 1");
  if (k == 1) return MultipoleTerm(moments.dim, 'R', ell, k);
  return kernel_moment_term(KernelKind::Laplace, ell - 1, F_polynomial(k, jet), moments).relabeled('R', ell, k);
}

MultipoleTerm multipole_S(int k, int ell, const DataJet& jet, const MomentTable& moments, double alpha1) {
  if (k < 0 || ell < 1) throw std::invalid_argument("multipole_S requires k >= 0 and ell >= 1");
  if (k <= 1) return MultipoleTerm(moments.dim, 'S', ell, k);
  return kernel_moment_term(KernelKind::Biharmonic, ell + 2, F_polynomial(k, jet), moments)
      .scaled(-alpha1)
      .relabeled('S', ell, k);
}

std::vector<MultipoleTerm> leading_AB(int k, const DataJet& jet, const MomentTable& moments, double alpha1) {
  const int dim = moments.dim;
  std::vector<MultipoleTerm> out;
  Polynomial F = k <= 1 ? Polynomial(dim) : F_polynomial(k, jet);
  std::vector<MultipoleTerm> coeffs;
  for (int m = 0; m <= 2; ++m)
    coeffs.push_back(kernel_moment_term(KernelKind::Biharmonic, m, F, moments).scaled(-alpha1));
  if (dim == 2) {
    for (int m = 0; m <= 2; ++m) out.push_back(coeffs[m].log_coefficient().relabeled('A', 2 - m, k));
    for (int m = 0; m <= 2; ++m) out.push_back(coeffs[m].non_log_part().relabeled('B', 2 - m, k));
  } else {
    for (int m = 0; m <= 2; ++m) out.push_back(coeffs[m].relabeled('A', 1 - m, k));
  }
  return out;
}

double log_constant_b(int k, const DataJet& jet, const MomentTable& moments) {
  if (k < 1) throw std::invalid_argument("log_constant_b requires k >= 1");
  if (k == 1) return 0.0;
  return -weighted_moment(moments, F_polynomial(k, jet)) / (2 * kPi);
}

LogConstant log_constant(int k, const DataJet& jet, const MomentTable& moments, double alpha2) {
  LogConstant lc;
  lc.b = log_constant_b(k, jet, moments);
  lc.c = -alpha2 * lc.b;
  return lc;
}

}  // namespace topoderiv
