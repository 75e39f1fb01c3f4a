#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "topoderiv/grid.hpp"

using namespace topoderiv;

namespace {

const double pi = std::numbers::pi;

GridSpec unit_grid(int dim, int nodes) {
  return GridSpec::box(dim, {0, 0, 0}, {1, 1, 1}, nodes, {'D', 'N', 'N', 'N', 'N', 'N'});
}

double total(const ScalarField& chi) {
  const auto m = lumped_mass(chi.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * chi.values[i];
  return s;
}

}  // namespace

TEST_CASE("grid indexing and dual cells") {
  auto g = unit_grid(3, 5);
  CHECK(g.size() == 125);
  CHECK(g.ijk(g.index(1, 2, 3)) == std::array<int, 3>{1, 2, 3});
  CHECK(g.node(g.index(4, 0, 2))[0] == 1.0);
  CHECK(g.dual_width(0, 0) == 0.125);
  CHECK(g.dual_width(0, 2) == 0.25);
  double vol = 0.0;
  for (double m : lumped_mass(g)) vol += m;
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.is_dirichlet(g.index(0, 3, 3)));
  CHECK_FALSE(g.is_dirichlet(g.index(4, 0, 0)));
  GridSpec bad = g;
  bad.faces = {'N', 'N', 'N', 'N', 'N', 'N'};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("stiffness annihilates constants and matches its diagonal") {
  for (int dim : {2, 3}) {
    auto g = unit_grid(dim, 7);
    std::vector<double> one(g.size(), 1.0), y;
    apply_stiffness(g, one, y);
    for (double v : y) CHECK(std::abs(v) < 1e-12);
    const auto d = stiffness_diagonal(g);
    for (std::size_t p : {std::size_t{0}, g.size() / 2, g.size() - 1}) {
      std::vector<double> e(g.size(), 0.0);
      e[p] = 1.0;
      apply_stiffness(g, e, y);
      CHECK(y[p] == doctest::Approx(d[p]));
    }
  }
}

TEST_CASE("misfits of a linear error") {
  // u - u* = x: int x^2 = 1/3, int |grad x|^2 = 1
  for (int dim : {2, 3}) {
    auto g = unit_grid(dim, 33);
    ScalarField u = sample(g, Polynomial::coordinate(dim, 0));
    CHECK(integrate_H1_misfit(u, Polynomial(dim)) == doctest::Approx(1.0).epsilon(1e-12));
    const double l2 = integrate_L2_misfit(u, Polynomial(dim));
    CHECK(std::abs(l2 - 1.0 / 3.0) < g.h(0) * g.h(0));
  }
}

TEST_CASE("trapezoidal misfit converges at second order") {
  auto err = [](int n) {
    auto g = unit_grid(2, n);
    ScalarField u = sample(g, [](const Vec& x) { return std::sin(x[0]) * std::exp(x[1]); });
    // int sin^2 x e^(2y) over the unit square
    const double exact = (0.5 - std::sin(2.0) / 4) * (std::exp(2.0) - 1) / 2;
    return std::abs(integrate_L2_misfit(u, Polynomial(2)) - exact);
  };
  const double slope = std::log2(err(33) / err(65));
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("jet_at reproduces polynomials and smooth fields") {
  for (int dim : {2, 3}) {
    auto g = unit_grid(dim, dim == 2 ? 65 : 33);
    Polynomial p = Polynomial::constant(dim, 0.5);
    p.add_term({1, 0, 0}, -1.2);
    p.add_term({1, 1, 0}, 2.0);
    p.add_term({0, 3, 0}, 0.7);
    if (dim == 3) p.add_term({1, 0, 2}, -0.9);
    Vec x0{0.5, 0.5, dim == 3 ? 0.5 : 0.0};
    auto jet = jet_at(sample(g, p), x0, 3);
    Polynomial want = p.shifted(x0);
    for (const auto& e : multi_indices(dim, 3)) CHECK(std::abs(jet.poly.coefficient(e) - want.coefficient(e)) < 1e-10);
  }
  auto g = unit_grid(2, 257);
  ScalarField u = sample(g, [](const Vec& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); });
  Vec x0{0.5, 0.5, 0};
  auto jet = jet_at(u, x0, 2);
  CHECK(jet.poly.coefficient({0, 0, 0}) == doctest::Approx(std::sin(1.5) * std::cos(1.0)).epsilon(1e-5));
  CHECK(jet.poly.coefficient({1, 0, 0}) == doctest::Approx(3 * std::cos(1.5) * std::cos(1.0)).epsilon(1e-5));
  CHECK(jet.poly.coefficient({1, 1, 0}) == doctest::Approx(-6 * std::cos(1.5) * std::sin(1.0)).epsilon(1e-5));
  CHECK_THROWS(jet_at(u, {0.005, 0.5, 0}, 2));
}

TEST_CASE("disc and ball intersection volumes") {
  CHECK(disc_rect_area(1.0, -2, 2, -2, 2) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(disc_rect_area(1.0, 0, 2, 0, 2) == doctest::Approx(pi / 4).epsilon(1e-14));
  // half-disc strip |x| < 1/2: 2 * (sqrt(3)/4 + pi/6)
  CHECK(disc_rect_area(1.0, -0.5, 0.5, -2, 2) == doctest::Approx(std::sqrt(3.0) / 2 + pi / 3).epsilon(1e-14));
  CHECK(disc_rect_area(1.0, 0.8, 2, 0.8, 2) == 0.0);
  CHECK(ball_box_volume(1.0, {-2, -2, -2}, {2, 2, 2}) == doctest::Approx(4 * pi / 3).epsilon(1e-12));
  CHECK(ball_box_volume(1.0, {0, 0, 0}, {2, 2, 2}) == doctest::Approx(pi / 6).epsilon(1e-12));
  // cap of height 1/2: pi h^2 (3r - h)/3
  CHECK(ball_box_volume(1.0, {-2, -2, 0.5}, {2, 2, 2}) == doctest::Approx(pi * 0.25 * 2.5 / 3).epsilon(1e-12));
}

TEST_CASE("characteristic fractions conserve the inclusion volume") {
  auto g2 = unit_grid(2, 129);
  Vec c2{0.5, 0.5, 0};
  for (int p = 3; p <= 9; ++p) {
    const double eps = std::ldexp(1.0, -p);
    CHECK(total(char_fraction(g2, c2, eps, InclusionShape::ball(2))) == doctest::Approx(pi * eps * eps).epsilon(1e-12));
    auto pent = fixtures::pentagon();
    CHECK(total(char_fraction(g2, c2, eps, pent)) ==
          doctest::Approx(compute_moments(pent, 0).measure() * eps * eps).epsilon(1e-12));
  }
  auto g3 = unit_grid(3, 33);
  Vec c3{0.5, 0.5, 0.5};
  for (int p = 3; p <= 7; ++p) {
    const double eps = std::ldexp(1.0, -p);
    CHECK(total(char_fraction(g3, c3, eps, InclusionShape::ball(3))) ==
          doctest::Approx(4 * pi / 3 * std::pow(eps, 3)).epsilon(1e-10));
    auto tet = fixtures::single_tet();
    CHECK(total(char_fraction(g3, c3, eps, tet)) ==
          doctest::Approx(compute_moments(tet, 0).measure() * std::pow(eps, 3)).epsilon(1e-3));
  }
  CHECK_THROWS_AS(char_fraction(g2, {0.1, 0.5, 0}, 0.2, InclusionShape::ball(2)), std::invalid_argument);
}

TEST_CASE("box fraction and interpolation") {
  auto g = unit_grid(2, 9);
  CHECK(total(box_fraction(g, {0.1, 0.2, 0}, {0.6, 0.9, 0})) == doctest::Approx(0.35).epsilon(1e-14));
  Polynomial p = Polynomial::constant(2, 1.0);
  p.add_term({1, 0, 0}, 2.0);
  p.add_term({0, 1, 0}, -3.0);
  auto u = sample(g, p);
  CHECK(u.interpolate({0.37, 0.81, 0}) == doctest::Approx(p({0.37, 0.81, 0})));
  CHECK_THROWS(u.interpolate({1.2, 0.5, 0}));
}
