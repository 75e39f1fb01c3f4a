#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "topoderiv/grid.hpp"
#include "topoderiv/moments.hpp"
#include "topoderiv/polynomial.hpp"

namespace topoderiv {

enum class CostKind { L2, H1 };
enum class Preconditioner { FastDiagonal, Jacobi };

std::string cost_name(CostKind c);

/// Problem data, discretization and run parameters. Polynomial data are in
/// global coordinates.
struct ProblemConfig {
  int dim = 2;
  GridSpec grid;
  Vec x0{0.5, 0.5, 0.5};
  InclusionShape shape;
  Polynomial f1{2}, f2{2}, u_star{2}, u_D{2}, u_N{2};  // u_N: outward flux on Sigma
  double alpha1 = 1.0, alpha2 = 1.0;
  CostKind cost = CostKind::H1;
  int order = 5;
  int n_max = 8;
  std::vector<double> eps;
  std::optional<std::pair<Vec, Vec>> omega_box;  // baseline Omega, empty by default
  Preconditioner preconditioner = Preconditioner::FastDiagonal;

  double alpha_of_cost() const { return cost == CostKind::L2 ? alpha1 : alpha2; }
};

/// Default eps set: 2^-3 ... 2^-7 in half octaves, times the smallest box side.
std::vector<double> default_eps(const GridSpec& g);

/// Parses a JSON config. Every violated condition is collected into one
/// std::invalid_argument whose message joins them with "; ".
ProblemConfig parse_config(const nlohmann::json& j);
ProblemConfig load_config(const std::string& path);
/// Re-checks a (possibly modified) config, e.g. after a --grid override.
void validate_config(const ProblemConfig& cfg);

/// Polynomial from [[coeff, [e1, e2(, e3)]], ...] or a bare number.
Polynomial parse_polynomial(const nlohmann::json& j, int dim);
nlohmann::json polynomial_to_json(const Polynomial& p);

}  // namespace topoderiv
