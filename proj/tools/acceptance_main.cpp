// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.
#include <iostream>

#include "acceptance.hpp"

int main() {
  using namespace topoderiv::acceptance;
  const auto results = run_all([](const CriterionResult& r) { std::cout << format_line(r) << std::endl; });
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed;
}
