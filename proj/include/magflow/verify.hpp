#pragma once

// Acceptance battery: ten self-contained checks with pinned tolerances,
// one result per criterion.  The CLI `verify` command and the acceptance
// test binary both run this list.

#include <string>
#include <vector>

namespace magflow {

struct CriterionResult {
  int id = 0;
  std::string label;
  bool pass = false;
  std::string detail;  // key figures, or the failure reason
};

std::vector<CriterionResult> run_acceptance();
bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace magflow
