// topoderiv <subcommand> --config <path> [--out <dir>] [--grid N] [--order K]
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "topoderiv/expansion.hpp"
#include "topoderiv/io.hpp"
#include "topoderiv/potentials.hpp"
#include "topoderiv/verify.hpp"

using namespace topoderiv;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  int grid = 0;
  int order = 0;
  std::string route = "general";
  int compare_grid = 0;
};

// Validation failures carry the list of violated invariants.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
}

ProblemConfig load(const Options& o, int grid_override = 0) {
  if (o.config.empty()) throw ValidationError("--config is required");
  nlohmann::json j = read_json(o.config);
  if (grid_override > 0) j["grid"] = grid_override;
  else if (o.grid > 0) j["grid"] = o.grid;
  if (o.order > 0) j["order"] = o.order;
  try {
    return parse_config(j);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

nlohmann::json term_json(const MultipoleTerm& t) {
  nlohmann::json j;
  j["name"] = t.name();
  j["degree"] = t.degree();
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : t.pieces())
    j["pieces"].push_back({{"r_pow", p.r_pow}, {"log", p.log}, {"q", polynomial_to_json(p.q)}});
  return j;
}

std::vector<Vec> probe_points(const InclusionShape& shape) {
  const double r = 2.0 * shape.outer_radius();
  if (shape.dim == 2) return {{r, 0, 0}, {0, r, 0}, {-r * 0.6, -r * 0.8, 0}, {r * 0.8, -r * 0.6, 0}};
  return {{r, 0, 0}, {0, r, 0}, {0, 0, -r}, {r * 0.48, -r * 0.6, r * 0.64}};
}

int cmd_moments(const Options& o) {
  const auto cfg = load(o);
  const auto m = compute_moments(cfg.shape, cfg.n_max);
  nlohmann::json j;
  j["shape"] = cfg.shape.kind_name();
  j["dim"] = cfg.dim;
  j["n_max"] = cfg.n_max;
  j["measure"] = m.measure();
  j["moments"] = nlohmann::json::array();
  for (const auto& [e, v] : m.values)
    j["moments"].push_back({{"exponent", std::vector<int>(e.begin(), e.begin() + cfg.dim)}, {"value", v}});
  const auto path = out_path(o, "moments.json");
  write_text(path, dump_json(j));
  std::cout << path << "\n";
  return 0;
}

int cmd_kernels(const Options& o) {
  const auto cfg = load(o);
  const auto ctx = make_corrector_context(cfg);
  const auto probes = probe_points(cfg.shape);
  const int kmax = std::min(cfg.order + 1, kMaxKernelOrder);
  nlohmann::json j;
  j["cost"] = cost_name(cfg.cost);
  j["dim"] = cfg.dim;
  j["probes"] = nlohmann::json::array();
  for (const Vec& p : probes) j["probes"].push_back(std::vector<double>(p.begin(), p.begin() + cfg.dim));
  j["orders"] = nlohmann::json::array();
  for (int k = 2; k <= kmax; ++k) {
    nlohmann::json jk;
    jk["k"] = k;
    const auto lc = log_constant(k, ctx.jet, ctx.moments, cfg.alpha2);
    jk["b"] = lc.b;
    jk["c"] = lc.c;
    jk["R"] = nlohmann::json::array();
    for (int l = 1; l <= 3; ++l) {
      const auto t = multipole_R(k, l, ctx.jet, ctx.moments);
      auto tj = term_json(t);
      tj["values"] = nlohmann::json::array();
      for (const Vec& p : probes) tj["values"].push_back(t(p));
      jk["R"].push_back(tj);
    }
    if (cfg.cost == CostKind::L2) {
      jk["S"] = nlohmann::json::array();
      for (int l = 1; l <= 3; ++l) {
        const auto t = multipole_S(k, l, ctx.jet, ctx.moments, cfg.alpha1);
        auto tj = term_json(t);
        tj["values"] = nlohmann::json::array();
        for (const Vec& p : probes) tj["values"].push_back(t(p));
        jk["S"].push_back(tj);
      }
      jk["leading"] = nlohmann::json::array();
      for (const auto& t : leading_AB(k, ctx.jet, ctx.moments, cfg.alpha1)) jk["leading"].push_back(term_json(t));
    }
    const auto U = newton_potential(k, ctx.jet, cfg.shape);
    jk["U"] = nlohmann::json::array();
    for (const Vec& p : probes) jk["U"].push_back(U(p));
    j["orders"].push_back(jk);
  }
  const auto path = out_path(o, "kernels.json");
  write_text(path, dump_json(j));
  std::cout << path << "\n";
  return 0;
}

int cmd_solve(const Options& o) {
  const auto cfg = load(o);
  ExpansionInputs in(cfg, cfg.order);
  fs::create_directories(fs::path(o.out) / "fields");
  const auto stem = [&](const std::string& n) { return (fs::path(o.out) / "fields" / n).string(); };
  write_field(stem("u0"), in.u0(), "u0");
  write_field(stem("p0"), in.p0(), "p0");
  nlohmann::json index = nlohmann::json::array({"u0", "p0"});
  for (const auto& [key, field] : in.correctors().fields()) {
    const std::string name = key.first + "_" + std::to_string(key.second);
    write_field(stem(name), field, key.first + "^(" + std::to_string(key.second) + ")");
    index.push_back(name);
  }
  const auto path = out_path(o, "fields.json");
  write_text(path, dump_json({{"fields", index}, {"directory", "fields"}}));
  std::cout << path << "\n";
  return 0;
}

ExpansionLedger build_ledger(const ProblemConfig& cfg, const ExpansionInputs& in, const std::string& route) {
  if (route == "general") return expand(in, cfg.order);
  if (route == "constant_f") return expand_special(in, cfg.order, SpecialRoute::ConstantF);
  if (route == "symmetric") return expand_special(in, cfg.order, SpecialRoute::Symmetric);
  if (route == "ball") return expand_special(in, cfg.order, SpecialRoute::Ball);
  throw ValidationError("unknown route " + route);
}

int cmd_expand(const Options& o) {
  const auto cfg = load(o);
  ExpansionInputs in(cfg, cfg.order);
  const auto ledger = build_ledger(cfg, in, o.route);
  const auto path = out_path(o, "ledger.json");
  write_text(path, dump_json(ledger_to_json(ledger)));
  std::cout << path << "\n";
  return 0;
}

int cmd_verify(const Options& o) {
  const auto cfg = load(o);
  ExpansionInputs in(cfg, cfg.order);
  const auto ledger = build_ledger(cfg, in, o.route);
  const auto dJ = direct_delta_J(cfg, in.u0(), cfg.eps);
  std::vector<double> noise;
  if (o.compare_grid > 0) {
    // cross-grid mode: the change of the direct values between grids is the noise floor
    const auto other = load(o, o.compare_grid);
    const auto dJ2 = direct_delta_J(other, solve_state(other, 0.0), other.eps);
    for (std::size_t i = 0; i < dJ.size(); ++i) noise.push_back(dJ[i] - dJ2[i]);
  }
  const auto s = sweep(cfg.eps, dJ, ledger, noise);
  const auto csv = out_path(o, "sweep.csv");
  write_text(csv, sweep_csv(s));
  auto summary = sweep_summary(s);
  if (!noise.empty()) summary["noise_grid"] = o.compare_grid;
  const auto js = out_path(o, "sweep.json");
  write_text(js, dump_json(summary));
  std::cout << csv << "\n" << js << "\n";
  return 0;
}

int cmd_selftest(const Options& o) {
  using namespace topoderiv::acceptance;
  const auto results = run_all([](const CriterionResult& r) { std::cout << format_line(r) << std::endl; });
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  if (o.out != ".") write_text(out_path(o, "selftest.json"), dump_json(to_json(results)));
  return failed == 0 ? 0 : 1;
}

void error_record(const std::string& type, const std::string& message) {
  nlohmann::json err;
  err["type"] = type;
  err["message"] = message;
  nlohmann::json violations = nlohmann::json::array();
  std::stringstream ss(message);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto b = item.find_first_not_of(' ');
    if (b != std::string::npos) violations.push_back(item.substr(b));
  }
  err["violations"] = violations;
  std::cerr << dump_json({{"error", err}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological expansions of PDE-constrained functionals"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", o.config, "problem configuration (JSON)");
    if (needs_config) c->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--grid", o.grid, "nodes per axis (overrides the config)")->check(CLI::PositiveNumber);
    sub->add_option("--order", o.order, "expansion order (overrides the config)")->check(CLI::PositiveNumber);
  };
  std::map<std::string, std::function<int(const Options&)>> commands = {
      {"moments", cmd_moments}, {"kernels", cmd_kernels}, {"solve", cmd_solve},
      {"expand", cmd_expand},   {"verify", cmd_verify},   {"selftest", cmd_selftest}};
  const std::map<std::string, std::string> help = {
      {"moments", "dump the moment table of omega"},
      {"kernels", "dump multipole terms and log constants at probe points"},
      {"solve", "write u0, p0 and the correctors as field dumps"},
      {"expand", "write the expansion ledger"},
      {"verify", "eps sweep against the ledger (CSV + JSON)"},
      {"selftest", "run the acceptance suite"}};
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, name != "selftest");
    if (name == "expand" || name == "verify")
      sub->add_option("--route", o.route, "general | constant_f | symmetric | ball");
    if (name == "verify") sub->add_option("--compare-grid", o.compare_grid, "second grid for the noise floor");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record("usage_error", e.what());
    return 2;
  }
  try {
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(o);
  } catch (const ValidationError& e) {
    error_record("validation_error", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    error_record("validation_error", e.what());
    return 2;
  } catch (const std::exception& e) {
    error_record("runtime_error", e.what());
    return 3;
  }
  return 0;
}
