#include <stdexcept>
#include <string>

#include "doctest.h"
#include "topoderiv/config.hpp"

using namespace topoderiv;
using nlohmann::json;

TEST_CASE("config defaults and polynomial data") {
  json j = json::parse(R"({"dim": 2, "grid": 65, "f1": 3, "f2": [[2.0, [0, 0]], [0.5, [1, 2]]],
                           "cost": "L2", "order": 4, "preconditioner": "jacobi"})");
  auto c = parse_config(j);
  CHECK(c.grid.n[0] == 65);
  CHECK(c.grid.n[2] == 1);
  CHECK(c.x0[0] == 0.5);
  CHECK(c.grid.faces[0] == 'D');
  CHECK(c.grid.faces[1] == 'N');
  CHECK(c.cost == CostKind::L2);
  CHECK(c.preconditioner == Preconditioner::Jacobi);
  CHECK(c.f2({0.5, 2.0, 0}) == doctest::Approx(3.0));
  CHECK(c.eps.size() == 9);
  CHECK(c.eps.front() == 0.125);
  CHECK(c.eps.back() == doctest::Approx(1.0 / 128));
  CHECK(polynomial_to_json(c.f2) == json::parse("[[2.0, [0, 0]], [0.5, [1, 2]]]"));
}

TEST_CASE("config validation enumerates every violation") {
  json j = json::parse(R"({"dim": 2, "grid": 65, "x0": [0.1, 0.5], "alpha1": -1, "cost": "H2",
                           "domain": {"faces": "NNNN"}, "eps": [0.5]})");
  try {
    parse_config(j);
    FAIL("expected a validation error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cost") != std::string::npos);
    CHECK(msg.find("Dirichlet") != std::string::npos);
    CHECK(msg.find("0.2*diam") != std::string::npos);
    CHECK(msg.find("alpha1") != std::string::npos);
    CHECK(msg.find("leaves the domain") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(json::parse(R"({"dim": 4})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"dim": 2, "f1": [[1, [1]]]})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"dim": 2, "n_max": 2, "f1": [[1, [3, 0]]]})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"dim": 2, "shape": {"kind": "polygon", "vertices": [[1,1],[2,1],[2,2]]}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"dim": 2, "omega_box": {"lo": [0.4, 0.4], "hi": [0.6, 0.6]}})")),
                  std::invalid_argument);
}

TEST_CASE("3-d config with a tet mesh") {
  json j = json::parse(R"({"dim": 3, "grid": 17, "shape": {"kind": "tet_mesh",
      "vertices": [[-0.3,-0.2,-0.25],[0.8,-0.1,-0.2],[-0.1,0.7,-0.3],[0.05,0.1,0.9]], "tets": [[0,1,2,3]]}})");
  auto c = parse_config(j);
  CHECK(c.shape.kind == InclusionShape::Kind::TetMesh);
  CHECK(c.grid.n[2] == 17);
  CHECK(c.x0[2] == 0.5);
}
