#pragma once

#include <functional>
#include <string>
#include <vector>

namespace penning::tools {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // measured values against their limits
  double seconds = 0.0;
};

struct ValidationOptions {
  int threads = 1;
  /// Called as each criterion finishes, in order.
  std::function<void(const CriterionResult&)> on_result;
};

/// Runs the twelve reproduction criteria against the default ⁹Be⁺ trap.
/// A criterion that throws is reported as failed with the error message.
std::vector<CriterionResult> run_acceptance(const ValidationOptions& options = {});

/// `PASS [n] title: detail` (or FAIL).
std::string format_result(const CriterionResult& result);

}  // namespace penning::tools
