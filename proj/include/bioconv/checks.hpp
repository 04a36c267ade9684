#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bioconv {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Quick self-checks: quadrature exactness, Jacobian against finite
/// differences, patch test, manufactured-data consistency.
std::vector<CheckResult> run_checks();

/// Prints one PASS/FAIL line per check; returns true if all pass.
bool report_checks(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace bioconv
