#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBinary = TOPODERIV_BINARY;
const std::string kConfigs = TOPODERIV_CONFIGS;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("topoderiv_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args, const fs::path& err = {}) {
  std::string cmd = kBinary + " " + args + " > /dev/null";
  cmd += err.empty() ? " 2>&1" : " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read(const fs::path& p) {
  std::ifstream f(p);
  return nlohmann::json::parse(f);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("cli: expand reproduces the ball d4 value") {
  const auto out = scratch("expand");
  REQUIRE(run("expand --config " + kConfigs + "/ball_h1_2d.json --grid 129 --order 5 --out " + out.string()) == 0);
  const auto ledger = read(out / "ledger.json");
  CHECK(ledger["cost"] == "H1");
  REQUIRE(ledger["entries"].size() == 5);
  // -alpha2 (f1 - f2)^2 / 2 with alpha2 = 1.3, f1 - f2 = 1
  CHECK(std::abs(ledger["entries"][3]["coeff"].get<double>() + 0.65) < 1e-8);
  CHECK(ledger["entries"][3]["scale"]["log"] == 1);
}

TEST_CASE("cli: moments of the unit disc") {
  const auto out = scratch("moments");
  REQUIRE(run("moments --config " + kConfigs + "/ball_h1_2d.json --out " + out.string()) == 0);
  const auto m = read(out / "moments.json");
  CHECK(m["moments"][0]["exponent"] == nlohmann::json::parse("[0, 0]"));
  CHECK(m["moments"][0]["value"].get<double>() == doctest::Approx(M_PI).epsilon(1e-15));
}

TEST_CASE("cli: verify with f1 = f2 gives a zero column, deterministically") {
  const auto a = scratch("verify_a"), b = scratch("verify_b");
  REQUIRE(run("verify --config " + kConfigs + "/equal_f.json --out " + a.string()) == 0);
  REQUIRE(run("verify --config " + kConfigs + "/equal_f.json --out " + b.string()) == 0);
  std::istringstream csv(slurp(a / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("eps,dJ_direct,", 0) == 0);
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    CHECK(line.substr(c1 + 1, c2 - c1 - 1) == "0");
    ++rows;
  }
  CHECK(rows == 9);
  CHECK(slurp(a / "sweep.json") == slurp(b / "sweep.json"));
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
}

TEST_CASE("cli: validation failures produce an error record") {
  const auto dir = scratch("invalid");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"dim": 2, "grid": 65, "alpha1": -1, "cost": "H2"})";
  const auto err = dir / "err.json";
  CHECK(run("expand --config " + (dir / "bad.json").string(), err) == 2);
  const auto rec = read(err);
  CHECK(rec["error"]["type"] == "validation_error");
  CHECK(rec["error"]["violations"].size() == 2);
  CHECK(run("solve", dir / "err2.json") == 2);
  CHECK(read(dir / "err2.json")["error"]["type"] == "usage_error");
}
