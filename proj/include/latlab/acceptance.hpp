#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latlab {

struct CriterionResult {
  int id = 0;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::vector<int> subset;           // criterion ids to run; run_all() for all
  double volume_corruption = 1.0;    // negative-control hook, scales Vol K
  long long budget = 20'000'000'000; // the dual-body frequency walks need > 1e9
  int threads = 0;                   // 0: hardware default
};

std::vector<int> all_criteria(); // {1, ..., 16}

// Runs the selected checks in id order, writing one "criterion N: PASS/FAIL"
// line per check to `log` as it completes. Shell histograms are computed
// once and shared across checks (and with the negative-control rerun).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace latlab
