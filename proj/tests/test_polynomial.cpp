#include <cmath>

#include "doctest.h"
#include "topoderiv/polynomial.hpp"

using namespace topoderiv;

TEST_CASE("polynomial arithmetic and evaluation") {
  Polynomial x = Polynomial::coordinate(2, 0), y = Polynomial::coordinate(2, 1);
  Polynomial p = 3.0 * x * x * y - 2.0 * y + Polynomial::constant(2, 1.5);
  CHECK(p.degree() == 3);
  CHECK(p({2.0, -1.0, 0.0}) == doctest::Approx(3 * 4 * -1 + 2 + 1.5));
  CHECK_FALSE(p.is_homogeneous());
  CHECK(p.homogeneous_part(3).is_homogeneous());
  CHECK(p.derivative(0)({2.0, -1.0, 0.0}) == doctest::Approx(6 * 2 * -1));
  CHECK((p - p).is_zero());
  CHECK(Polynomial(2).degree() == -1);
  CHECK_THROWS(Polynomial(2).add_term({0, 0, 1}, 1.0));
}

TEST_CASE("shifted polynomial reproduces values") {
  Polynomial p(3);
  p.add_term({2, 1, 0}, 1.25);
  p.add_term({0, 0, 3}, -0.5);
  p.add_term({1, 0, 0}, 2.0);
  Vec o{0.3, -0.7, 1.1};
  Polynomial q = p.shifted(o);
  for (Vec y : {Vec{0, 0, 0}, Vec{0.2, 0.4, -0.1}, Vec{-1, 2, 0.5}})
    CHECK(q(y) == doctest::Approx(p(add(o, y))).epsilon(1e-13));
}

TEST_CASE("ray coefficients match direct evaluation") {
  Polynomial p(2);
  p.add_term({3, 0, 0}, 1.0);
  p.add_term({1, 2, 0}, -2.0);
  p.add_term({0, 0, 0}, 0.5);
  Vec x{0.4, -0.3, 0}, q{0.6, 0.8, 0};
  auto c = p.along_ray(x, q);
  for (double s : {0.0, 0.3, 1.7}) {
    double v = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) v += c[m] * std::pow(s, m);
    CHECK(v == doctest::Approx(p(add(x, scale(q, s)))).epsilon(1e-13));
  }
}

TEST_CASE("multi-index enumeration counts") {
  CHECK(multi_indices(2, 3).size() == 10);
  CHECK(multi_indices(3, 2).size() == 10);
  CHECK(multi_indices_exact(3, 4).size() == 15);
  CHECK(binomial(6, 2) == 15.0);
  CHECK(factorial(5) == 120.0);
}

TEST_CASE("dot and norm powers") {
  Vec x{1.0, 2.0, 0.0};
  Vec y{0.5, -1.0, 0.0};
  CHECK(dot_power(x, 3, 2)(y) == doctest::Approx(std::pow(dot(x, y, 2), 3)));
  CHECK(norm2_power(2, 2)(y) == doctest::Approx(std::pow(dot(y, y, 2), 2)));
}
