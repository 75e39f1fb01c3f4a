#pragma once

#include <string>

#include "topoderiv/config.hpp"

namespace fixtures {

// [0,1]^d, Dirichlet on the left face, x0 at the centre, unit ball omega.
// f2 = 2 gives u0 = 2 x1 - x1^2; u* = u0 - x1 (1 + x2); f1 = 3.
inline nlohmann::json reference_json(int dim, int nodes, const std::string& cost) {
  nlohmann::json j;
  j["dim"] = dim;
  j["grid"] = nodes;
  j["f1"] = 3.0;
  j["f2"] = 2.0;
  j["u_star"] = nlohmann::json::parse("[[1.0, " + std::string(dim == 2 ? "[1,0]" : "[1,0,0]") + "], [-1.0, " +
                                      (dim == 2 ? "[2,0]" : "[2,0,0]") + "], [-1.0, " +
                                      (dim == 2 ? "[1,1]" : "[1,1,0]") + "]]");
  j["alpha1"] = 0.7;
  j["alpha2"] = 1.3;
  j["cost"] = cost;
  j["eps"] = {0.125, 0.0625};
  return j;
}

inline topoderiv::ProblemConfig reference_config(int dim, int nodes, topoderiv::CostKind cost) {
  return topoderiv::parse_config(reference_json(dim, nodes, cost == topoderiv::CostKind::L2 ? "L2" : "H1"));
}

}  // namespace fixtures
