#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace topoderiv::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs criteria 1..10 in order; each result is passed to `report` as soon as
/// it is known. Criterion 10 includes the wall time of the whole suite.
std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& report);

/// "PASS [3] name: detail (1.2 s)"
std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace topoderiv::acceptance
