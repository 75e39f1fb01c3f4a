#include "topoderiv/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "topoderiv/potentials.hpp"

namespace topoderiv {

double ScaleFunction::operator()(double eps) const {
  double v = measure * std::pow(eps, a);
  if (log) v *= std::log(eps);
  return v;
}

ScaleFunction ladder(int k, int dim, double measure) {
  if (k < 1) throw std::invalid_argument("ladder index starts at 1");
  ScaleFunction s;
  s.measure = measure;
  if (dim == 3) {
    s.a = k + 2;
    return s;
  }
  if (k == 1) {
    s.a = 2;
  } else if (k % 2 == 0) {
    s.a = 2 + k / 2;
    s.log = 1;
  } else {
    s.a = 2 + (k - 1) / 2;
  }
  return s;
}

double evaluate_ledger(const ExpansionLedger& ledger, double eps, int N) {
  double s = 0.0;
  for (const auto& e : ledger.entries)
    if (N < 0 || e.k <= N) s += e.scale(eps) * e.coeff;
  return s;
}

nlohmann::json ledger_to_json(const ExpansionLedger& ledger) {
  nlohmann::json j;
  j["cost"] = cost_name(ledger.cost);
  j["dim"] = ledger.dim;
  j["order"] = ledger.order;
  j["route"] = ledger.route;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : ledger.entries) {
    nlohmann::json b = nlohmann::json::object();
    for (const auto& [label, v] : e.breakdown) b[label] = v;
    j["entries"].push_back({{"k", e.k},
                            {"scale", {{"a", e.scale.a}, {"log", e.scale.log}, {"measure", e.scale.measure}}},
                            {"coeff", e.coeff},
                            {"breakdown", b}});
  }
  return j;
}

ExpansionLedger ledger_from_json(const nlohmann::json& j) {
  ExpansionLedger l;
  const std::string cost = j.at("cost").get<std::string>();
  if (cost != "H1" && cost != "L2") throw std::invalid_argument("ledger cost must be H1 or L2");
  l.cost = cost == "L2" ? CostKind::L2 : CostKind::H1;
  l.dim = j.at("dim").get<int>();
  l.order = j.at("order").get<int>();
  l.route = j.value("route", std::string("general"));
  for (const auto& e : j.at("entries")) {
    LedgerEntry le;
    le.k = e.at("k").get<int>();
    le.scale.a = e.at("scale").at("a").get<double>();
    le.scale.log = e.at("scale").at("log").get<int>();
    le.scale.measure = e.at("scale").value("measure", 1.0);
    le.coeff = e.at("coeff").get<double>();
    if (e.contains("breakdown"))
      for (const auto& [label, v] : e["breakdown"].items()) le.breakdown[label] = v.get<double>();
    l.entries.push_back(le);
  }
  return l;
}

namespace {

void add_range(std::vector<TermSpec>& out, TermSpec::Kind kind, int j_max, int m_offset, const std::string& field,
               double scale, const std::string& label) {
  // j = 0..j_max with corrector order m = m_offset - j
  for (int j = 0; j <= j_max; ++j) {
    TermSpec t;
    t.kind = kind;
    t.j = j;
    t.m = m_offset - j;
    t.field = field;
    t.scale = scale;
    t.label = label;
    out.push_back(t);
  }
}

TermSpec p0_term(int n) {
  TermSpec t;
  t.kind = TermSpec::Kind::P0;
  t.j = n;
  t.label = "p0_taylor";
  return t;
}

}  // namespace

std::vector<TermSpec> term_specs(int k, const ProblemConfig& cfg) {
  using K = TermSpec::Kind;
  if (k < 1) throw std::invalid_argument("coefficient index starts at 1");
  std::vector<TermSpec> t;
  const double a2 = cfg.alpha2;
  if (cfg.dim == 2) {
    const int n = k / 2;
    const bool odd = k % 2 == 1;
    if (cfg.cost == CostKind::H1) {
      if (odd) {
        t.push_back(p0_term(n));
        add_range(t, K::Potential, n - 2, n, "", 1.0, "P_sum");
        add_range(t, K::Field, n - 2, n, "v", -a2, "w_sum");
      } else {
        add_range(t, K::LogConst, n - 2, n, "", 1.0, "c_sum");
      }
      return t;
    }
    if (odd) {
      t.push_back(p0_term(n));
      add_range(t, K::Potential, n - 4, n - 2, "", 1.0, "P_sum");
      add_range(t, K::Field, n - 2, n, "s1", 1.0, "s1_sum");
      add_range(t, K::Field, n - 3, n - 1, "s3", 1.0, "s3_sum");
      add_range(t, K::Field, n - 4, n - 2, "s5", 1.0, "s5_sum");
      add_range(t, K::Field, n - 2, n, "s7", 1.0, "s7_sum");
      add_range(t, K::Field, n - 3, n - 1, "s8", 1.0, "s8_sum");
      add_range(t, K::Field, n - 4, n - 2, "s9", 1.0, "s9_sum");
      add_range(t, K::Field, n - 5, n - 2, "w", 1.0, "w_sum");
      add_range(t, K::Field, n - 2, n, "m", 1.0, "m_sum");
    } else {
      add_range(t, K::Field, n - 2, n, "s2", 1.0, "s2_sum");
      add_range(t, K::Field, n - 3, n - 1, "s4", 1.0, "s4_sum");
      add_range(t, K::Field, n - 4, n - 2, "s6", 1.0, "s6_sum");
      add_range(t, K::Field, n - 2, n, "n", 1.0, "n_sum");
    }
    return t;
  }
  const int n = k - 1;
  t.push_back(p0_term(n));
  if (cfg.cost == CostKind::H1) {
    add_range(t, K::Potential, n - 2, n, "", 1.0, "P_sum");
    add_range(t, K::Field, n - 3, n - 1, "v", -a2, "w_sum");
    return t;
  }
  add_range(t, K::Potential, n - 4, n - 2, "", 1.0, "P_sum");
  add_range(t, K::Field, n - 3, n - 1, "s1", 1.0, "s1_sum");
  add_range(t, K::Field, n - 4, n - 2, "s2", 1.0, "s2_sum");
  add_range(t, K::Field, n - 5, n - 3, "s3", 1.0, "s3_sum");
  add_range(t, K::Field, n - 6, n - 3, "w", 1.0, "w_sum");
  add_range(t, K::Field, n - 3, n - 1, "m", 1.0, "m_sum");
  return t;
}

std::vector<CorrectorKey> corrector_plan(int order, const ProblemConfig& cfg) {
  std::vector<CorrectorKey> plan;
  for (int k = 1; k <= order; ++k)
    for (const auto& t : term_specs(k, cfg))
      if (t.kind == TermSpec::Kind::Field) {
        const CorrectorKey key{t.field, t.m};
        if (std::find(plan.begin(), plan.end(), key) == plan.end()) plan.push_back(key);
      }
  return plan;
}

int max_jet_order(int order, const ProblemConfig& cfg) {
  int j = 0;
  for (int k = 1; k <= order; ++k)
    for (const auto& t : term_specs(k, cfg)) j = std::max(j, t.j);
  return j;
}

ExpansionInputs::ExpansionInputs(const ProblemConfig& cfg, int order) : cfg_(cfg), order_(order) {
  if (order < 1) throw std::invalid_argument("expansion order must be at least 1");
  ctx_ = make_corrector_context(cfg_);
  u0_ = solve_state(cfg_, 0.0);
  p0_ = solve_adjoint_p0(cfg_, u0_);
  correctors_ = solve_correctors(corrector_plan(order, cfg_), ctx_);
}

const Polynomial& ExpansionInputs::jet(const std::string& name, int m, int j) const {
  const auto key = std::make_tuple(name, m, j);
  auto it = jets_.find(key);
  if (it != jets_.end()) return it->second;
  const ScalarField& f = name == "p0" ? p0_ : correctors_.at(name, m);
  Polynomial p(cfg_.dim);
  if (name == "p0" || !correctors_.is_zero(name, m)) p = jet_at(f, cfg_.x0, j).poly;
  return jets_.emplace(key, std::move(p)).first->second;
}

double ExpansionInputs::field_moment(const std::string& name, int m, int j) const {
  if (name != "p0" && correctors_.is_zero(name, m)) return 0.0;
  const Polynomial g = (ctx_.jet.diff * -1.0).truncated(j);
  const Polynomial z = jet(name, m, j);
  return weighted_moment(ctx_.moments, (g * z).homogeneous_part(j)) / measure();
}

double ExpansionInputs::newton_moment(int m, int j) const {
  const Polynomial a = (ctx_.jet.diff * -1.0).homogeneous_part(j);
  const Polynomial F = F_polynomial(m, ctx_.jet);
  if (a.is_zero() || F.is_zero()) return 0.0;
  PotentialEvaluator U(cfg_.shape, F, KernelKind::Laplace);
  const int deg = std::max(j + m + 12, 20);
  return integrate_over_shape(cfg_.shape, [&](const Vec& y) { return a(y) * U(y); }, deg) / measure();
}

double ExpansionInputs::potential_moment(int m, int j) const {
  const Polynomial a = (ctx_.jet.diff * -1.0).homogeneous_part(j);
  const Polynomial F = F_polynomial(m, ctx_.jet);
  if (a.is_zero() || F.is_zero()) return 0.0;
  // H1: P = -alpha2 U, the Newton evaluator with its prefactor; L2: biharmonic
  PotentialEvaluator P = cfg_.cost == CostKind::H1 ? PotentialEvaluator(cfg_.shape, F, KernelKind::Laplace, -cfg_.alpha2)
                                                   : biharmonic_potential(m, ctx_.jet, cfg_.shape, cfg_.alpha1);
  const int deg = std::max(j + m + 12, 20);
  return integrate_over_shape(cfg_.shape, [&](const Vec& y) { return a(y) * P(y); }, deg) / measure();
}

double evaluate_term(const TermSpec& t, const ExpansionInputs& in) {
  switch (t.kind) {
    case TermSpec::Kind::P0:
      return in.field_moment("p0", 0, t.j);
    case TermSpec::Kind::Potential:
      return in.potential_moment(t.m, t.j);
    case TermSpec::Kind::Field:
      return t.scale * in.field_moment(t.field, t.m, t.j);
    case TermSpec::Kind::LogConst: {
      const auto& ctx = in.context();
      const Polynomial a = (ctx.jet.diff * -1.0).homogeneous_part(t.j);
      const double c = log_constant(t.m, ctx.jet, ctx.moments, in.config().alpha2).c;
      return c * weighted_moment(ctx.moments, a) / in.measure();
    }
  }
  return 0.0;
}

ExpansionLedger expand(const ExpansionInputs& in, int order) {
  const ProblemConfig& cfg = in.config();
  if (order > in.order()) throw std::invalid_argument("inputs were prepared for a lower order");
  ExpansionLedger l;
  l.cost = cfg.cost;
  l.dim = cfg.dim;
  l.order = order;
  for (int k = 1; k <= order; ++k) {
    LedgerEntry e;
    e.k = k;
    e.scale = ladder(k, cfg.dim, in.measure());
    for (const auto& t : term_specs(k, cfg)) e.breakdown[t.label] += evaluate_term(t, in);
    for (const auto& [label, v] : e.breakdown) e.coeff += v;
    l.entries.push_back(e);
  }
  return l;
}

std::string route_name(SpecialRoute r) {
  switch (r) {
    case SpecialRoute::ConstantF:
      return "constant_f";
    case SpecialRoute::Symmetric:
      return "symmetric";
    case SpecialRoute::Ball:
      return "ball";
  }
  return "";
}

namespace {

// (1/|w|)(1/j!) int grad^j g(x0)[x]^j from a Taylor polynomial of g.
double taylor_moment(const ExpansionInputs& in, const Polynomial& jet, int j) {
  return weighted_moment(in.context().moments, jet.homogeneous_part(j)) / in.measure();
}

}  // namespace

ExpansionLedger expand_special(const ExpansionInputs& in, int order, SpecialRoute route) {
  const ProblemConfig& cfg = in.config();
  if (cfg.cost != CostKind::H1 || cfg.dim != 2)
    throw std::invalid_argument("special routes cover the H1 cost in d = 2 only");
  if (cfg.f1.degree() > 0 || cfg.f2.degree() > 0) throw std::invalid_argument("special routes need constant f1, f2");
  if (route == SpecialRoute::Symmetric && !is_symmetric(cfg.shape))
    throw std::invalid_argument("symmetric route needs a symmetric inclusion");
  if (route == SpecialRoute::Ball && cfg.shape.kind != InclusionShape::Kind::Ball)
    throw std::invalid_argument("ball route needs the unit ball");
  if (order > in.order()) throw std::invalid_argument("inputs were prepared for a lower order");

  const double f21 = cfg.f2({0, 0, 0}) - cfg.f1({0, 0, 0});
  const double f12 = -f21;
  const double a2 = cfg.alpha2;
  const auto& ctx = in.context();
  const double pi = std::numbers::pi;
  auto p0_part = [&](int n) { return f21 * taylor_moment(in, in.jet("p0", 0, n), n); };
  auto w_part = [&](int m, int j) {
    if (in.correctors().is_zero("v", m)) return 0.0;
    return f21 * -a2 * taylor_moment(in, in.jet("v", m, j), j);
  };
  const bool sym = route != SpecialRoute::ConstantF;

  ExpansionLedger l;
  l.cost = cfg.cost;
  l.dim = 2;
  l.order = order;
  l.route = route_name(route);
  for (int k = 1; k <= order; ++k) {
    LedgerEntry e;
    e.k = k;
    e.scale = ladder(k, 2, in.measure());
    auto& b = e.breakdown;
    const int n = k / 2;
    if (k == 1) {
      b["p0_taylor"] = f21 * in.jet("p0", 0, 0).coefficient({0, 0, 0});
    } else if (k == 2) {
      b["zero"] = 0.0;
    } else if (k == 3) {
      b["p0_taylor"] = sym ? 0.0 : p0_part(1);
    } else if (k == 4) {
      b["c_sum"] = route == SpecialRoute::Ball ? -a2 * f12 * f12 / 2.0
                                               : f21 * log_constant(2, ctx.jet, ctx.moments, a2).c;
    } else if (k == 5) {
      b["p0_taylor"] = p0_part(2);
      if (route == SpecialRoute::Ball) {
        // int_B U^(2) = (f1 - f2) pi / 8
        b["P_sum"] = a2 * f12 / pi * (f12 * pi / 8.0);
        b["w_sum"] = a2 * f12 * in.jet("v", 2, 0).coefficient({0, 0, 0});
      } else {
        b["P_sum"] = in.potential_moment(2, 0);
        b["w_sum"] = w_part(2, 0);
      }
    } else if (k % 2 == 0) {
      b["zero"] = 0.0;
    } else if (!sym) {
      b["p0_taylor"] = p0_part(n);
      double w = 0.0;
      for (int j = 0; j <= n - 2; ++j) w += w_part(n - j, j);
      b["w_sum"] = w;
    } else {
      b["p0_taylor"] = n % 2 == 0 ? p0_part(n) : 0.0;
      double w = 0.0;
      for (int j = 0; j <= (n % 2 == 0 ? n - 2 : n - 3); j += 2) w += w_part(n - j, j);
      b["w_sum"] = w;
    }
    for (const auto& [label, v] : b) e.coeff += v;
    l.entries.push_back(e);
  }
  return l;
}

}  // namespace topoderiv
