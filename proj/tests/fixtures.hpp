#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "topoderiv/moments.hpp"

namespace fixtures {

using topoderiv::InclusionShape;
using topoderiv::Vec;

// [-1,1]^3 split into six Kuhn tets.
inline InclusionShape cube_tets() {
  std::vector<Vec> v;
  for (int i = 0; i < 8; ++i) v.push_back({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0});
  std::vector<std::array<int, 4>> tets;
  int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (auto& p : perms) {
    int a = 0, b = a | (1 << p[0]), c = b | (1 << p[1]), d = 7;
    tets.push_back({a, b, c, d});
  }
  return InclusionShape::tet_mesh(v, tets);
}

inline InclusionShape single_tet() {
  return InclusionShape::tet_mesh({{-0.3, -0.2, -0.25}, {0.8, -0.1, -0.2}, {-0.1, 0.7, -0.3}, {0.05, 0.1, 0.9}},
                                  {{0, 1, 2, 3}});
}

inline InclusionShape pentagon() {
  return InclusionShape::polygon({{-0.6, -0.4, 0}, {0.9, -0.5, 0}, {0.7, 0.6, 0}, {-0.2, 0.8, 0}, {-0.8, 0.1, 0}});
}

inline InclusionShape square() {
  return InclusionShape::polygon({{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}});
}

// One vertex per angular sector keeps the origin inside.
inline InclusionShape random_star_polygon(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> jitter(0.1, 0.9), rad(0.5, 1.5);
  std::vector<Vec> v;
  for (int i = 0; i < n; ++i) {
    double a = 2 * std::numbers::pi * (i + jitter(rng)) / n, r = rad(rng);
    v.push_back({r * std::cos(a), r * std::sin(a), 0});
  }
  return InclusionShape::polygon(v);
}

}  // namespace fixtures
