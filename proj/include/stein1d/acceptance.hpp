#pragma once

#include <string>
#include <vector>

namespace stein1d {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

std::string criterion_name(int id);

// Runs one numbered criterion; exceptions are caught and reported as failures.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids);

}  // namespace stein1d
