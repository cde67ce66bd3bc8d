#pragma once

#include <string>
#include <vector>

namespace sirdelay::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Identifiers of every acceptance criterion, in order.
std::vector<int> criterion_ids();

/// Runs one criterion. Never throws: exceptions become a failed result.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_all();

/// "[PASS] 3 cubic-solver (0.00 s): ..." style line.
std::string format_line(const CriterionResult& r);

}  // namespace sirdelay::acceptance
