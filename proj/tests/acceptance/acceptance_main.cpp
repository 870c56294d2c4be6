// Reproduction acceptance suite: one PASS/FAIL line per criterion, nonzero
// exit if any criterion fails.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "penning/tools/validation.hpp"

int main(int argc, char** argv) {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (argc > 1) threads = std::max(1, std::atoi(argv[1]));

  using penning::tools::CriterionResult;
  int failed = 0;
  const auto results = penning::tools::run_acceptance(
      {.threads = threads, .on_result = [&](const CriterionResult& r) {
         failed += !r.passed;
         std::cout << penning::tools::format_result(r) << std::endl;
       }});
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
