#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavcov/config.hpp"

namespace uavcov {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: none
};

struct ValidationOptions {
  long drops = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Acceptance criteria 1..9; each result includes its runtime budget in `pass`.
CheckResult acceptance_criterion(int id, const ValidationOptions& opt);
inline constexpr int kAcceptanceCount = 9;

// Inversion corpus and polynomial derivative exactness.
std::vector<CheckResult> run_selftest();

// Monte Carlo against analytic values at one configuration: coverage, cell-free coverage,
// the massive-array limit, the interference-limited form, the distance law and the shot
// transforms.
std::vector<CheckResult> run_validation(const RunConfig& rc, const ValidationOptions& opt);

// "PASS name (1.2 s) detail" lines.
void print_results(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace uavcov
