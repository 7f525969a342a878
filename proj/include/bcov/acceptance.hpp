#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bcov {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::string detail;  // failure reason or exception text
  double seconds = 0;
};

constexpr int kCriteriaCount = 13;

// Runs criterion id in [1, 13]; exceptions are reported as failures.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();

}  // namespace bcov
