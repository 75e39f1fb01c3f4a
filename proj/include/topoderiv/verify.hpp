#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "topoderiv/expansion.hpp"

namespace topoderiv {

/// J(Omega_eps) - J(Omega) from the unperturbed state and delta = u_eps - u0:
/// L2: alpha1 (2 e.M delta + delta.M delta), H1: alpha2 (2 e.K delta + delta.K delta),
/// e = u0 - u*, with the same mass and stiffness as the misfit quadrature.
double delta_J(const ProblemConfig& cfg, const ScalarField& u0, const ScalarField& delta);

/// Unit-ball omega with constant f1, f2: u_eps - u0 assembled from the closed
/// form U^(2), the solved corrector v^(2) and b^(2),
/// d=2: eps^2 (U^(2)(T^-1 x) + v^(2)(x) + ln(eps) b^(2)), d=3: eps^2 U^(2)(T^-1 x) + eps^3 v^(2)(x),
/// with T^-1 x = (x - x0)/eps.
ScalarField ball_delta(const ProblemConfig& cfg, const ScalarField& v2, double eps);

/// Throws std::invalid_argument("unresolved inclusion ...") when the discrete
/// volume of x0 + eps*omega misses eps^d |omega| by more than 1e-3 relative.
void check_resolved(const ProblemConfig& cfg, double eps);

/// One delta solve per eps; eps points run in parallel.
std::vector<double> direct_delta_J(const ProblemConfig& cfg, const ScalarField& u0, const std::vector<double>& eps);
double direct_delta_J(const ProblemConfig& cfg, const ScalarField& u0, double eps);

struct OrderFit {
  int N = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;  // leading eps points above the noise floor
  bool noise_limited = false;
};

/// Least-squares slope of ln|r| against ln|l(eps)| over the leading run of
/// points (largest eps first) with |r| above floor_factor * noise. Noise may
/// be empty (floor 0). Fewer than 3 usable points or r2 < 0.9 flags the fit
/// noise-limited. Needs at least 4 eps points.
OrderFit fit_order(const std::vector<double>& eps, const std::vector<double>& residual, const ScaleFunction& next,
                   const std::vector<double>& noise = {}, double floor_factor = 3.0);

struct Extraction {
  std::vector<int> slots;
  std::vector<double> coeff;
  std::vector<double> stderr_;  // NaN without residual degrees of freedom
  double condition = 0.0;       // of the column-equilibrated weighted design
  bool ill_conditioned = false; // condition > 1e10
  std::string guidance;
};

/// Weighted least squares of data against the columns l_k(eps_i), rows
/// weighted by 1/|scales[0](eps_i)|. Needs scales.size() + 2 points spanning
/// at least two octaves.
Extraction extract_coefficients(const std::vector<double>& eps, const std::vector<double>& data,
                                const std::vector<ScaleFunction>& scales, const std::vector<int>& slots = {});

struct SweepResult {
  std::vector<double> eps;                     // strictly decreasing
  std::vector<double> dJ;                      // direct
  std::vector<std::vector<double>> predicted;  // [N][i], N = 0..order
  std::vector<std::vector<double>> residual;   // [N][i]
  std::vector<OrderFit> fits;                  // r_N against l_{N+1}
  Extraction extraction;                       // slots 1..min(order, points-2)
  ExpansionLedger ledger;
};

/// Residuals r_N = dJ - sum_{k<=N} l_k d^k for every N up to the ledger
/// order. eps is sorted decreasingly; duplicates throw.
SweepResult sweep(const std::vector<double>& eps, const std::vector<double>& dJ, const ExpansionLedger& ledger,
                  const std::vector<double>& noise = {});
/// Direct solves on cfg.grid, then the residual analysis.
SweepResult sweep(const ProblemConfig& cfg, const ScalarField& u0, const ExpansionLedger& ledger,
                  const std::vector<double>& noise = {});

/// Columns eps, dJ_direct, pred_N, r_N; 17 significant digits.
std::string sweep_csv(const SweepResult& s);
nlohmann::json sweep_summary(const SweepResult& s);

}  // namespace topoderiv
