#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <algorithm>

#include "doctest.h"
#include "topoderiv/moments.hpp"

using namespace topoderiv;

namespace {

const double pi = std::numbers::pi;

InclusionShape cube_tets() {
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

InclusionShape random_star_polygon(std::mt19937_64& rng, int n) {
  // one vertex per angular sector keeps the origin inside
  std::uniform_real_distribution<double> jitter(0.1, 0.9), rad(0.5, 1.5);
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = 2 * pi * (i + jitter(rng)) / n;
  std::vector<Vec> v;
  for (double t : a) {
    double r = rad(rng);
    v.push_back({r * std::cos(t), r * std::sin(t), 0});
  }
  return InclusionShape::polygon(v);
}

}  // namespace

TEST_CASE("unit ball moments") {
  auto m2 = compute_moments(InclusionShape::ball(2), 6);
  CHECK(m2.measure() == pi);
  CHECK(m2.at({1, 0, 0}) == 0.0);
  CHECK(m2.at({2, 2, 0}) == doctest::Approx(pi / 24).epsilon(1e-14));
  auto m3 = compute_moments(InclusionShape::ball(3), 6);
  CHECK(m3.measure() == doctest::Approx(4 * pi / 3).epsilon(1e-15));
  CHECK(m3.at({2, 0, 0}) == doctest::Approx(4 * pi / 15).epsilon(1e-14));
  CHECK(m3.at({2, 2, 2}) == doctest::Approx(4 * pi / 945).epsilon(1e-14));
  CHECK_THROWS_AS(m3.at({4, 4, 0}), std::out_of_range);
}

TEST_CASE("ball second moment agrees with Monte Carlo") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 2000000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    double x = u(rng), y = u(rng), z = u(rng);
    double v = (x * x + y * y + z * z < 1) ? 8 * x * x : 0.0;
    s += v;
    s2 += v * v;
  }
  double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
  auto m3 = compute_moments(InclusionShape::ball(3), 2);
  CHECK(std::abs(mean - m3.at({2, 0, 0})) < 4 * se);
}

TEST_CASE("square polygon moments are exact") {
  auto sq = InclusionShape::polygon({{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}});
  auto m = compute_moments(sq, 8);
  CHECK(std::abs(m.measure() - 4.0) < 1e-14);
  CHECK(std::abs(m.at({2, 0, 0}) - 4.0 / 3.0) < 1e-14);
  CHECK(std::abs(m.at({2, 2, 0}) - 4.0 / 9.0) < 1e-14);
  CHECK(std::abs(m.at({4, 2, 0}) - 4.0 / 15.0) < 1e-14);
  CHECK(std::abs(m.at({3, 1, 0})) < 1e-14);
  // clockwise orientation gives the same table
  auto cw = compute_moments(InclusionShape::polygon({{-1, 1, 0}, {1, 1, 0}, {1, -1, 0}, {-1, -1, 0}}), 8);
  CHECK(std::abs(cw.at({4, 2, 0}) - 4.0 / 15.0) < 1e-14);
}

TEST_CASE("random polygon moments agree with Monte Carlo") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 5; ++trial) {
    auto poly = random_star_polygon(rng, 7);
    auto table = compute_moments(poly, 3);
    double R = poly.outer_radius();
    std::uniform_real_distribution<double> u(-R, R);
    const int n = 10000000;
    const double box = 4 * R * R;
    std::vector<Exponent> exps = multi_indices(2, 3);
    std::vector<double> s(exps.size(), 0.0), s2(exps.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      Vec p{u(rng), u(rng), 0};
      if (!poly.contains(p)) continue;
      for (std::size_t e = 0; e < exps.size(); ++e) {
        double v = box * std::pow(p[0], exps[e][0]) * std::pow(p[1], exps[e][1]);
        s[e] += v;
        s2[e] += v * v;
      }
    }
    for (std::size_t e = 0; e < exps.size(); ++e) {
      double mean = s[e] / n, se = std::sqrt((s2[e] / n - mean * mean) / n);
      CHECK(std::abs(mean - table.at(exps[e])) < 4 * se);
    }
  }
}

TEST_CASE("tetrahedral mesh moments") {
  auto m = compute_moments(cube_tets(), 6);
  CHECK(std::abs(m.measure() - 8.0) < 1e-13);
  CHECK(std::abs(m.at({2, 0, 0}) - 8.0 / 3.0) < 1e-13);
  CHECK(std::abs(m.at({2, 2, 2}) - 8.0 / 27.0) < 1e-13);
  CHECK(std::abs(m.at({1, 0, 0})) < 1e-13);
  auto single = InclusionShape::tet_mesh({{-0.1, -0.1, -0.1}, {0.9, -0.1, -0.1}, {-0.1, 0.9, -0.1}, {-0.1, -0.1, 0.9}},
                                         {{0, 1, 2, 3}});
  auto ms = compute_moments(single, 2);
  CHECK(ms.measure() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(ms.at({1, 0, 0}) == doctest::Approx(1.0 / 24.0 - 0.1 / 6.0).epsilon(1e-13));
  // int over the reference tet of x y = 1/120, shifted by -0.1 in each coordinate
  double xy = 1.0 / 120 - 0.1 * (1.0 / 24) * 2 + 0.01 / 6;
  CHECK(ms.at({1, 1, 0}) == doctest::Approx(xy).epsilon(1e-13));
}

TEST_CASE("shape validation") {
  CHECK_NOTHROW(validate_shape(InclusionShape::ball(2)));
  CHECK_THROWS_AS(validate_shape(InclusionShape::polygon({{0.1, 0.1, 0}, {1, 0.1, 0}, {0.1, 1, 0}})),
                  std::invalid_argument);
  // origin on an edge
  CHECK_THROWS_AS(validate_shape(InclusionShape::polygon({{-1, 0, 0}, {1, 0, 0}, {0, 1, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(validate_shape(InclusionShape::tet_mesh({{-1, -1, -1}, {1, -1, -1}, {0, 1, -1}, {0, 0, -1}}, {{0, 1, 2, 3}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_moments(InclusionShape::ball(2), 13), std::invalid_argument);
}

TEST_CASE("symmetry detection") {
  CHECK(is_symmetric(InclusionShape::ball(3)));
  CHECK(is_symmetric(InclusionShape::polygon({{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}})));
  CHECK_FALSE(is_symmetric(InclusionShape::polygon({{-0.2, -0.2, 0}, {0.8, -0.2, 0}, {-0.2, 0.8, 0}})));
  CHECK(is_symmetric(cube_tets()));
}

TEST_CASE("weighted moments and odd symmetry") {
  auto m = compute_moments(InclusionShape::ball(3), 4);
  CHECK(weighted_moment(m, Polynomial::constant(3, 1.0)) == doctest::Approx(4 * pi / 3));
  CHECK(weighted_moment(m, Polynomial::monomial(3, {2, 0, 0})) == doctest::Approx(4 * pi / 15));
  Polynomial odd(3);
  odd.add_term({1, 2, 0}, 3.0);
  odd.add_term({0, 0, 3}, -1.0);
  CHECK(weighted_moment(m, odd) == 0.0);
  CHECK_THROWS_AS(weighted_moment(m, Polynomial::monomial(3, {5, 0, 0})), std::out_of_range);
}

TEST_CASE("data jets and F polynomials") {
  Polynomial f1(2), f2(2), us(2);
  f1.add_term({2, 0, 0}, 1.0);
  auto jet = make_data_jet(f1, f2, us, {0, 0, 0}, 4);
  CHECK(F_polynomial(1, jet).is_zero());
  auto F4 = F_polynomial(4, jet);
  CHECK(F4.coefficient({2, 0, 0}) == 1.0);
  CHECK(F4.is_homogeneous());
  CHECK(F4.degree() == 2);
  CHECK(F_polynomial(2, jet).is_zero());  // (f1-f2)(0) = 0

  Polynomial g(2);
  g.add_term({1, 0, 0}, 2.0);
  g.add_term({0, 1, 0}, -3.0);
  g.add_term({0, 0, 0}, 0.25);
  auto jet2 = make_data_jet(g, Polynomial(2), us, {0.5, 0.5, 0}, 3);
  CHECK(F_polynomial(2, jet2).coefficient({0, 0, 0}) == doctest::Approx(0.25 + 1.0 - 1.5));
  auto F3 = F_polynomial(3, jet2);
  CHECK(F3.coefficient({1, 0, 0}) == 2.0);
  CHECK(F3.coefficient({0, 1, 0}) == -3.0);
  CHECK_THROWS(F_polynomial(6, jet2));
}
