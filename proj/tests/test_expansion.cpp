#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "reference_problem.hpp"
#include "topoderiv/expansion.hpp"
#include "topoderiv/potentials.hpp"

using namespace topoderiv;

TEST_CASE("ladder shapes and decay") {
  const double pi = std::numbers::pi;
  CHECK(ladder(1, 2, pi)(0.1) == doctest::Approx(pi * 0.01));
  CHECK(ladder(2, 2, pi)(0.1) == doctest::Approx(pi * 1e-3 * std::log(0.1)));
  CHECK(ladder(2, 2, 1.0)(0.1) < 0.0);
  CHECK(ladder(3, 2, 1.0).a == 3);
  CHECK(ladder(5, 2, 1.0).a == 4);
  CHECK(ladder(3, 3, 1.0).a == 5);
  CHECK_THROWS_AS(ladder(0, 2, 1.0), std::invalid_argument);
  for (int dim : {2, 3})
    for (int k = 1; k < 9; ++k) {
      const double r1 = std::abs(ladder(k + 1, dim, 1.0)(1e-2) / ladder(k, dim, 1.0)(1e-2));
      const double r2 = std::abs(ladder(k + 1, dim, 1.0)(1e-4) / ladder(k, dim, 1.0)(1e-4));
      CHECK(r2 < r1);
    }
}

TEST_CASE("ledger evaluation and JSON round trip") {
  ExpansionLedger l;
  CHECK(evaluate_ledger(l, 0.1) == 0.0);
  l.cost = CostKind::L2;
  l.dim = 2;
  l.order = 3;
  l.route = "general";
  for (int k = 1; k <= 3; ++k) {
    LedgerEntry e;
    e.k = k;
    e.scale = ladder(k, 2, 2.5);
    e.breakdown["a"] = 0.1 * k;
    e.breakdown["b"] = -1.0 / 3.0;
    e.coeff = e.breakdown["a"] + e.breakdown["b"];
    l.entries.push_back(e);
  }
  const double eps = 0.03;
  CHECK(evaluate_ledger(l, eps, 1) == doctest::Approx(2.5 * eps * eps * (0.1 - 1.0 / 3.0)));
  const auto back = ledger_from_json(nlohmann::json::parse(ledger_to_json(l).dump()));
  CHECK(back.cost == CostKind::L2);
  REQUIRE(back.entries.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.entries[i].coeff == l.entries[i].coeff);
    CHECK(back.entries[i].breakdown == l.entries[i].breakdown);
  }
  CHECK(evaluate_ledger(back, eps) == evaluate_ledger(l, eps));
  CHECK_THROWS(ledger_from_json(nlohmann::json::parse(R"({"cost": "H3", "dim": 2, "order": 0, "entries": []})")));
}

TEST_CASE("term tables of the four cases") {
  auto h1 = fixtures::reference_config(2, 33, CostKind::H1);
  CHECK(term_specs(1, h1).size() == 1);
  CHECK(term_specs(2, h1).empty());
  REQUIRE(term_specs(4, h1).size() == 1);
  CHECK(term_specs(4, h1)[0].kind == TermSpec::Kind::LogConst);
  CHECK(term_specs(4, h1)[0].m == 2);
  // d^5: p0 (j=2), P^(2) and w^(2) at j = 0
  CHECK(term_specs(5, h1).size() == 3);
  auto plan = corrector_plan(7, h1);
  CHECK(plan.size() == 2);
  CHECK(max_jet_order(7, h1) == 3);

  auto l2 = fixtures::reference_config(2, 33, CostKind::L2);
  CHECK(term_specs(1, l2).size() == 1);
  CHECK(term_specs(4, l2).size() == 2);  // s2^(2), n^(2)
  CHECK(term_specs(5, l2).size() == 4);  // p0, s1^(2), s7^(2), m^(2)

  auto h13 = fixtures::reference_config(3, 17, CostKind::H1);
  CHECK(term_specs(1, h13).size() == 1);
  CHECK(term_specs(3, h13).size() == 2);
  CHECK(term_specs(4, h13).size() == 4);  // p0, P at j = 0, 1, w at j = 0
}

TEST_CASE("reference problem: leading coefficients") {
  auto cfg = fixtures::reference_config(2, 65, CostKind::H1);
  ExpansionInputs in(cfg, 5);
  const auto l = expand(in, 5);
  REQUIRE(l.entries.size() == 5);
  // p0 = -2 alpha2 x1 (1 + x2) is reproduced by the discrete adjoint
  CHECK(l.entries[0].coeff == doctest::Approx(1.5 * cfg.alpha2).epsilon(1e-10));
  CHECK(l.entries[1].coeff == 0.0);
  // d^4 = -alpha2 (f1 - f2)^2 / 2 for the unit ball
  CHECK(l.entries[3].coeff == doctest::Approx(-cfg.alpha2 * 0.5).epsilon(1e-8));
  for (const auto& e : l.entries) {
    double s = 0.0;
    for (const auto& [label, v] : e.breakdown) s += v;
    CHECK(s == e.coeff);
  }

  auto l2cfg = fixtures::reference_config(2, 65, CostKind::L2);
  ExpansionInputs in2(l2cfg, 3);
  const auto l2 = expand(in2, 3);
  // u0 - u* = x1 (1 + x2); p0 solves -Lap p = -2 alpha1 x1 (1 + x2), p = 0 on the left face
  CHECK(std::isfinite(l2.entries[0].coeff));
  CHECK(l2.entries[0].coeff == doctest::Approx(-in2.p0().interpolate(cfg.x0)).epsilon(1e-6));
}

TEST_CASE("H1 identities: c = -alpha2 b and P = -alpha2 U") {
  auto cfg = fixtures::reference_config(2, 33, CostKind::H1);
  auto ctx = make_corrector_context(cfg);
  for (int k = 2; k <= 5; ++k) {
    const auto lc = log_constant(k, ctx.jet, ctx.moments, cfg.alpha2);
    CHECK(lc.c == -cfg.alpha2 * log_constant_b(k, ctx.jet, ctx.moments));
  }
  const Polynomial F = F_polynomial(2, ctx.jet);
  PotentialEvaluator U(cfg.shape, F, KernelKind::Laplace);
  PotentialEvaluator P(cfg.shape, F, KernelKind::Laplace, -cfg.alpha2);
  for (Vec x : {Vec{0.1, 0.2, 0}, Vec{1.5, -0.4, 0}, Vec{-3.0, 2.0, 0}}) CHECK(P(x) == -cfg.alpha2 * U(x));
}

TEST_CASE("special routes agree with the general route") {
  auto cfg = fixtures::reference_config(2, 65, CostKind::H1);
  ExpansionInputs in(cfg, 5);
  const auto general = expand(in, 5);
  for (auto route : {SpecialRoute::ConstantF, SpecialRoute::Symmetric, SpecialRoute::Ball}) {
    const auto special = expand_special(in, 5, route);
    CHECK(special.route == route_name(route));
    for (int k = 0; k < 5; ++k) {
      INFO("route " << route_name(route) << " k " << k + 1);
      CHECK(std::abs(special.entries[k].coeff - general.entries[k].coeff) <=
            1e-8 * std::max(1.0, std::abs(general.entries[k].coeff)));
    }
  }
  CHECK(expand_special(in, 5, SpecialRoute::Ball).entries[3].coeff == -cfg.alpha2 * 0.5);

  auto l2 = fixtures::reference_config(2, 33, CostKind::L2);
  ExpansionInputs in2(l2, 2);
  CHECK_THROWS_AS(expand_special(in2, 2, SpecialRoute::ConstantF), std::invalid_argument);
}
