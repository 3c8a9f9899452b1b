#pragma once

#include <string>
#include <vector>

namespace qfa::acceptance {

struct CriterionResult {
  int number = 0;
  std::string suite;
  std::string name;
  std::string type;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Names of the individual suites, in criterion order.
std::vector<std::string> suite_names();

// Runs one named suite ("pbw", "hopf", ...) or "all".
std::vector<CriterionResult> run(const std::string& suite, const std::string& type_filter = "");

}  // namespace qfa::acceptance
