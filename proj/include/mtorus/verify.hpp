// Cross-validation suite: every check compares an implementation pathway
// against an independent oracle (eigenvalue-list continuation, ODE
// collocation, closed forms, dual series) at a fixed tolerance.  The CLI
// `verify` command and the acceptance test binary both run these.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mtorus::verify {

struct CheckResult {
  std::string name;
  std::string detail;   // what was compared
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  double runtime_ms = 0.0;
};

// Run one named check; throws std::invalid_argument for an unknown name.
CheckResult run_check(const std::string& name, std::uint64_t seed);

// All check names in execution order.
std::vector<std::string> check_names();

// Run every check whose name contains `filter` (all when empty).
std::vector<CheckResult> run_all(const std::string& filter, std::uint64_t seed);

}  // namespace mtorus::verify
