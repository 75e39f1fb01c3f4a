#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "topoderiv/config.hpp"
#include "topoderiv/solver.hpp"

namespace topoderiv {

/// l(eps) = measure * eps^a * (ln eps)^log. The log slots are negative for
/// eps < 1; decay of the ladder is a statement about |l|.
struct ScaleFunction {
  double a = 0.0;
  int log = 0;
  double measure = 1.0;  // |omega|

  double operator()(double eps) const;
};

/// Ladder of the configured case. d=2: l1 = |w| eps^2, l_2n = |w| eps^(2+n) ln eps,
/// l_2n+1 = |w| eps^(2+n). d=3: l_n = |w| eps^(n+2).
ScaleFunction ladder(int k, int dim, double measure);

struct LedgerEntry {
  int k = 0;
  ScaleFunction scale;
  double coeff = 0.0;
  std::map<std::string, double> breakdown;
};

struct ExpansionLedger {
  CostKind cost = CostKind::H1;
  int dim = 2;
  int order = 0;
  std::string route = "general";
  std::vector<LedgerEntry> entries;
};

/// sum over entries with k <= N (all when N < 0) of l_k(eps) d^k.
double evaluate_ledger(const ExpansionLedger& ledger, double eps, int N = -1);
nlohmann::json ledger_to_json(const ExpansionLedger& ledger);
ExpansionLedger ledger_from_json(const nlohmann::json& j);

/// One summand family of a coefficient, j is the Taylor degree.
struct TermSpec {
  enum class Kind {
    P0,         // (1/|w|) int Taylor_j((f2-f1) p0)
    Potential,  // (1/|w|) int a_j * {P or -alpha2 U}^(m)
    Field,      // (1/|w|) int Taylor_j((f2-f1) * scale * field^(m))
    LogConst    // (1/|w|) c^(m) int a_j
  };
  Kind kind = Kind::P0;
  int j = 0;
  int m = 0;
  std::string field;  // corrector name for Field
  double scale = 1.0;
  std::string label;  // breakdown bucket
};

/// Summands of d^k for the configured cost kind and dimension.
std::vector<TermSpec> term_specs(int k, const ProblemConfig& cfg);
/// Correctors needed by d^1..d^order.
std::vector<CorrectorKey> corrector_plan(int order, const ProblemConfig& cfg);
/// Highest Taylor degree required of p0 and of corrector jets.
int max_jet_order(int order, const ProblemConfig& cfg);

/// Everything the coefficient formulas read: state, adjoint, correctors and
/// cached point jets.
class ExpansionInputs {
 public:
  ExpansionInputs(const ProblemConfig& cfg, int order);
  ExpansionInputs(const ExpansionInputs&) = delete;
  ExpansionInputs& operator=(const ExpansionInputs&) = delete;

  const ProblemConfig& config() const { return cfg_; }
  const CorrectorContext& context() const { return ctx_; }
  const ScalarField& u0() const { return u0_; }
  const ScalarField& p0() const { return p0_; }
  const CorrectorSet& correctors() const { return correctors_; }
  int order() const { return order_; }

  /// Taylor polynomial (in y = x - x0) of p0 or a corrector, order j.
  const Polynomial& jet(const std::string& name, int m, int j) const;
  /// (1/|w|) int_w Taylor_j((f2 - f1) * field) - the common building block.
  double field_moment(const std::string& name, int m, int j) const;
  /// (1/|w|) int_w a_j * potential^(m) for the cost's adjoint potential.
  double potential_moment(int m, int j) const;
  /// (1/|w|) int_w a_j * U^(m) (no -alpha2 factor).
  double newton_moment(int m, int j) const;
  double measure() const { return ctx_.moments.measure(); }

 private:
  ProblemConfig cfg_;
  int order_;
  CorrectorContext ctx_;
  ScalarField u0_, p0_;
  CorrectorSet correctors_;
  mutable std::map<std::tuple<std::string, int, int>, Polynomial> jets_;
};

double evaluate_term(const TermSpec& t, const ExpansionInputs& in);

/// General route: every coefficient from the full corrector and potential sums.
ExpansionLedger expand(const ExpansionInputs& in, int order);

enum class SpecialRoute { ConstantF, Symmetric, Ball };
std::string route_name(SpecialRoute r);
/// Shortcut formulas for constant f1, f2 (and symmetric or unit-ball omega).
/// Only the H1 cost in d = 2 is covered; other cases and violated
/// preconditions throw std::invalid_argument.
ExpansionLedger expand_special(const ExpansionInputs& in, int order, SpecialRoute route);

}  // namespace topoderiv
