#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "topoderiv/config.hpp"
#include "topoderiv/grid.hpp"
#include "topoderiv/kernels.hpp"

namespace topoderiv {

/// Dirichlet values on Gamma and outward flux on Sigma; empty functions mean 0.
/// `face` is 0..5 for x-, x+, y-, y+, z-, z+.
struct BoundaryData {
  std::function<double(const Vec&)> dirichlet;
  std::function<double(const Vec&, int face)> neumann;
};

/// -Laplace u = source in D with the boundary data of `bc`. `load` is added
/// to the assembled right-hand side as is (weak-form terms such as the H1
/// adjoint functional).
struct PoissonProblem {
  GridSpec grid;
  std::vector<double> source;
  std::vector<double> load;
  BoundaryData bc;
};

struct SolverOptions {
  Preconditioner preconditioner = Preconditioner::FastDiagonal;
  double rel_tol = 1e-10;
  int max_iterations = 0;  // 0: 200 * sqrt(unknowns)
};

struct SolveStats {
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Vertex-centred finite volumes on the node grid: the 5/7-point Laplacian
/// with half cells on the faces (identical to second-order ghost nodes on
/// Sigma), lumped mass, Dirichlet rows eliminated, PCG on the free nodes.
/// Throws std::runtime_error when PCG does not reach the tolerance.
ScalarField solve(const PoissonProblem& problem, const SolverOptions& opts = {}, SolveStats* stats = nullptr);

/// Right-hand side vector M f + Neumann loads + extra load (free rows only
/// meaningful).
std::vector<double> assemble_rhs(const PoissonProblem& problem);

SolverOptions solver_options(const ProblemConfig& cfg);

/// Source f_{Omega_eps} = f2 + (f1 - f2) * min(1, chi_Omega + chi_eps) at the nodes;
/// eps = 0 gives the unperturbed source.
std::vector<double> state_source(const ProblemConfig& cfg, double eps);
ScalarField solve_state(const ProblemConfig& cfg, double eps);
/// u_eps - u_0 directly: -Laplace delta = (f1 - f2)(chi_{Omega_eps} - chi_Omega)
/// with homogeneous data.
ScalarField solve_delta(const ProblemConfig& cfg, double eps);
/// Unperturbed adjoint. L2: -Laplace p = -2 alpha1 (u0 - u*). H1: weak form
/// (grad p, grad phi) = -2 alpha2 (grad(u0 - u*), grad phi) assembled with
/// the discrete stiffness. Homogeneous Dirichlet on Gamma, zero flux on Sigma.
ScalarField solve_adjoint_p0(const ProblemConfig& cfg, const ScalarField& u0);

/// Shared inputs of the corrector problems.
struct CorrectorContext {
  const ProblemConfig* cfg = nullptr;
  DataJet jet;
  MomentTable moments;
};
CorrectorContext make_corrector_context(const ProblemConfig& cfg);

/// Boundary data g(x) = sum of terms at x - x0 for a harmonic corrector z:
/// z = g on Gamma, flux of z = flux of g on Sigma.
struct CorrectorData {
  std::vector<MultipoleTerm> terms;
  double source = 0.0;      // constant volume source (n^(k))
  std::string source_field; // name of a corrector used as volume source (m^(k))
  double source_scale = 0.0;
  bool is_zero() const;
};

/// Data of corrector `name` in {v, w, m, n, s1..s9} at order k for the
/// configured cost and dimension. In the H1 case w is -alpha2 v, not a
/// separate problem, and this throws.
CorrectorData corrector_data(const std::string& name, int k, const CorrectorContext& ctx);

/// Multiplies every piece of a term by ln|x|.
MultipoleTerm times_log(const MultipoleTerm& t);

BoundaryData boundary_from_terms(const std::vector<MultipoleTerm>& terms, const Vec& x0, int dim);

using CorrectorKey = std::pair<std::string, int>;

/// Named correctors at their orders. Zero data yields stored zero fields
/// without a solve.
class CorrectorSet {
 public:
  explicit CorrectorSet(int dim = 2) : dim_(dim) {}
  int dim() const { return dim_; }
  bool has(const std::string& name, int k) const { return fields_.count({name, k}) > 0; }
  const ScalarField& at(const std::string& name, int k) const;
  void put(const std::string& name, int k, ScalarField f, bool zero);
  /// True when the stored field is identically zero by construction.
  bool is_zero(const std::string& name, int k) const;
  const std::map<CorrectorKey, ScalarField>& fields() const { return fields_; }

 private:
  int dim_;
  std::map<CorrectorKey, ScalarField> fields_;
  std::map<CorrectorKey, bool> zero_;
};

/// Solves every corrector in `plan` (plus m's v dependencies). Independent
/// solves are distributed over worker threads.
CorrectorSet solve_correctors(const std::vector<CorrectorKey>& plan, const CorrectorContext& ctx);
/// Every corrector family of the configured case up to order max_k.
std::vector<CorrectorKey> full_corrector_plan(int max_k, CostKind cost, int dim);

}  // namespace topoderiv
