#pragma once

#include <vector>

namespace topoderiv {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

constexpr int kMaxGaussPoints = 64;

/// Cached rule with n points, 1 <= n <= kMaxGaussPoints.
const GaussRule& gauss_rule(int n);

/// Panel breakpoints on [a, b] refined geometrically (ratio 2) toward
/// `focus` until the panel next to it is no wider than `scale`.
std::vector<double> graded_breakpoints(double a, double b, double focus, double scale);

/// Composite Gauss over the given breakpoints.
template <class F>
double composite_gauss(const std::vector<double>& breaks, int n, F&& f) {
  const GaussRule& g = gauss_rule(n);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    if (hi <= lo) continue;
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
    total += h * s;
  }
  return total;
}

}  // namespace topoderiv
