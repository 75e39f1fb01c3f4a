#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "reference_problem.hpp"
#include "topoderiv/verify.hpp"

using namespace topoderiv;

namespace {

std::vector<double> dyadic_eps(int count) {
  std::vector<double> e;
  for (int i = 0; i < count; ++i) e.push_back(0.125 * std::pow(2.0, -0.5 * i));
  return e;
}

ExpansionLedger synthetic_ledger(int dim, const std::vector<double>& coeffs, double measure) {
  ExpansionLedger l;
  l.dim = dim;
  l.order = static_cast<int>(coeffs.size());
  for (int k = 1; k <= l.order; ++k) {
    LedgerEntry e;
    e.k = k;
    e.scale = ladder(k, dim, measure);
    e.coeff = coeffs[k - 1];
    l.entries.push_back(e);
  }
  return l;
}

}  // namespace

TEST_CASE("extraction recovers a synthetic ledger") {
  const auto eps = dyadic_eps(9);
  const double pi = std::acos(-1.0);
  std::vector<double> data;
  for (double e : eps) data.push_back(ladder(1, 2, pi)(e) * 1.0 + ladder(3, 2, pi)(e) * 2.0);
  const auto ex = extract_coefficients(eps, data, {ladder(1, 2, pi), ladder(3, 2, pi)}, {1, 3});
  CHECK(ex.slots == std::vector<int>{1, 3});
  CHECK(std::abs(ex.coeff[0] - 1.0) < 1e-10);
  CHECK(std::abs(ex.coeff[1] - 2.0) < 1e-10);
  CHECK_FALSE(ex.ill_conditioned);

  for (int dim : {2, 3}) {
    const std::vector<double> c = {1.7, -0.3, 0.9, -2.2, 0.45};
    const auto l = synthetic_ledger(dim, c, dim == 2 ? pi : 4.0 * pi / 3.0);
    std::vector<double> dJ;
    for (double e : eps) dJ.push_back(evaluate_ledger(l, e));
    const auto s = sweep(eps, dJ, l);
    REQUIRE(s.extraction.coeff.size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(s.extraction.coeff[k] - c[k]) < 1e-9);
    CHECK(std::abs(s.residual[5].back()) < 1e-15);
  }

  CHECK_THROWS_AS(extract_coefficients({0.1, 0.09, 0.08, 0.07}, {1, 1, 1, 1}, {ladder(1, 2, 1.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(extract_coefficients({0.1, 0.05, 0.025}, {1, 1, 1}, {ladder(1, 2, 1.0), ladder(3, 2, 1.0)}),
                  std::invalid_argument);
}

TEST_CASE("ill-conditioned designs are flagged") {
  // two identical columns
  const auto eps = dyadic_eps(6);
  std::vector<double> data;
  for (double e : eps) data.push_back(e * e);
  const auto ex = extract_coefficients(eps, data, {ladder(1, 2, 1.0), ladder(1, 2, 1.0)});
  CHECK(ex.ill_conditioned);
  CHECK_FALSE(ex.guidance.empty());
}

TEST_CASE("order fits on synthetic residuals") {
  const auto eps = dyadic_eps(8);
  ScaleFunction pure;
  pure.a = 1;
  std::vector<double> r3, r3log, noise;
  for (double e : eps) {
    r3.push_back(0.7 * e * e * e);
    r3log.push_back(-0.7 * e * e * e * std::log(e));
  }
  const auto f = fit_order(eps, r3, pure);
  CHECK(std::abs(f.slope - 3.0) < 0.05);
  CHECK_FALSE(f.noise_limited);
  ScaleFunction with_log;
  with_log.a = 3;
  with_log.log = 1;
  CHECK(fit_order(eps, r3log, with_log).slope == doctest::Approx(1.0).epsilon(1e-12));
  // the log factor bends a pure-power fit
  CHECK(std::abs(fit_order(eps, r3log, pure).slope - 3.0) > 0.05);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1e-12);
  std::vector<double> floor(eps.size(), 1e-12);
  for (double& v : noise = std::vector<double>(eps.size())) v = gauss(rng);
  CHECK(fit_order(eps, noise, with_log, floor).noise_limited);
  CHECK(fit_order(eps, noise, with_log).noise_limited);

  // residual above the floor only for the leading points
  std::vector<double> mixed = r3;
  std::vector<double> fl(eps.size(), 0.0);
  for (std::size_t i = 5; i < eps.size(); ++i) fl[i] = 1.0;
  const auto g = fit_order(eps, mixed, pure, fl);
  CHECK(g.points == 5);
  CHECK(std::abs(g.slope - 3.0) < 0.05);
  CHECK_THROWS_AS(fit_order({0.1, 0.05, 0.025}, {1, 2, 3}, pure), std::invalid_argument);
}

TEST_CASE("direct delta J: trivial cases and the semi-analytic ball route") {
  auto j = fixtures::reference_json(2, 65, "H1");
  j["f1"] = 2.0;
  auto same = parse_config(j);
  const auto u0s = solve_state(same, 0.0);
  CHECK(direct_delta_J(same, u0s, 0.1) == 0.0);
  j = fixtures::reference_json(2, 65, "L2");
  j["alpha1"] = 0.0;
  auto zero = parse_config(j);
  CHECK(direct_delta_J(zero, solve_state(zero, 0.0), 0.1) == 0.0);

  double direct[2], semi[2];
  const int grids[2] = {129, 257};
  for (int g = 0; g < 2; ++g) {
    auto cfg = fixtures::reference_config(2, grids[g], CostKind::H1);
    const auto u0 = solve_state(cfg, 0.0);
    const auto ctx = make_corrector_context(cfg);
    const auto cs = solve_correctors({{"v", 2}}, ctx);
    direct[g] = direct_delta_J(cfg, u0, 0.0625);
    semi[g] = delta_J(cfg, u0, ball_delta(cfg, cs.at("v", 2), 0.0625));
  }
  // Richardson estimate of the 257 error of each route; the larger one is the grid error
  const double grid_error = std::max(std::abs(direct[1] - direct[0]), std::abs(semi[1] - semi[0])) / 3.0;
  MESSAGE("semi-analytic vs direct: " << std::abs(semi[1] - direct[1]) << ", grid error " << grid_error);
  CHECK(std::abs(semi[1] - direct[1]) <= 3.0 * grid_error);
}

TEST_CASE("unresolved inclusions are rejected") {
  auto j = fixtures::reference_json(3, 17, "H1");
  j["shape"] = nlohmann::json::parse(R"({"kind": "tet_mesh",
      "vertices": [[-0.3,-0.2,-0.25],[0.8,-0.1,-0.2],[-0.1,0.7,-0.3],[0.05,0.1,0.9]], "tets": [[0,1,2,3]]})");
  auto cfg = parse_config(j);
  CHECK_THROWS_AS(check_resolved(cfg, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(check_resolved(cfg, -1.0), std::invalid_argument);
  auto ball = fixtures::reference_config(2, 33, CostKind::H1);
  CHECK_NOTHROW(check_resolved(ball, 0.1));
}

TEST_CASE("sweep tables on the reference problem") {
  auto cfg = fixtures::reference_config(2, 129, CostKind::H1);
  cfg.eps = dyadic_eps(7);
  ExpansionInputs in(cfg, 5);
  const auto ledger = expand(in, 5);
  const auto s = sweep(cfg, in.u0(), ledger);
  REQUIRE(s.residual.size() == 6);
  REQUIRE(s.predicted.size() == 6);
  for (const auto& r : s.residual) CHECK(r.size() == s.eps.size());
  for (std::size_t i = 1; i < s.eps.size(); ++i) CHECK(s.eps[i] < s.eps[i - 1]);
  // r0 = dJ decays like l1, and the known expansion shrinks the residual
  CHECK(s.fits[0].slope == doctest::Approx(1.0).epsilon(0.02));
  for (std::size_t i = 0; i < s.eps.size(); ++i) CHECK(std::abs(s.residual[4][i]) < std::abs(s.residual[1][i]));
  CHECK(s.extraction.coeff[0] == doctest::Approx(ledger.entries[0].coeff).epsilon(1e-3));

  const std::string csv = sweep_csv(s);
  CHECK(csv.rfind("eps,dJ_direct,pred_1,pred_2,pred_3,pred_4,pred_5,r_0,r_1,r_2,r_3,r_4,r_5\n", 0) == 0);
  const auto summary = sweep_summary(s);
  CHECK(summary["fits"].size() == 6);
  CHECK(summary["ledger"]["order"] == 5);

  std::vector<double> dup = {0.1, 0.1, 0.05, 0.025};
  CHECK_THROWS_AS(sweep(dup, {1, 1, 1, 1}, ledger), std::invalid_argument);
}
