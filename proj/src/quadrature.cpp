#include "topoderiv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace topoderiv {

namespace {

GaussRule build_rule(int n) {
  GaussRule r;
  // legendre_p_zeros returns the non-negative zeros in increasing order
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime<double>(n, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    if (z == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w);
    } else {
      r.x.push_back(z);
      r.w.push_back(w);
      r.x.push_back(-z);
      r.w.push_back(w);
    }
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
  static const std::vector<GaussRule> table = [] {
    std::vector<GaussRule> t(kMaxGaussPoints + 1);
    for (int k = 1; k <= kMaxGaussPoints; ++k) t[k] = build_rule(k);
    return t;
  }();
  if (n < 1 || n > kMaxGaussPoints) throw std::invalid_argument("Gauss rule size out of range");
  return table[n];
}

std::vector<double> graded_breakpoints(double a, double b, double focus, double scale) {
  std::vector<double> out{a, b};
  if (!(b > a)) return out;
  focus = std::clamp(focus, a, b);
  scale = std::max(scale, 1e-14 * (b - a));
  auto side = [&](double end) {
    double len = std::abs(end - focus);
    if (len == 0.0) return;
    for (double w = len * 0.5; w > scale; w *= 0.5) out.push_back(focus + (end > focus ? w : -w));
  };
  side(a);
  side(b);
  if (focus > a && focus < b) out.push_back(focus);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace topoderiv
