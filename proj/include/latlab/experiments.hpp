#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "latlab/config.hpp"

namespace latlab {

// One sweep row: the full set of statistics for a (dimension, q, body)
// triple. Optional columns are NaN when the config leaves them off or the
// dimension does not support them; `error` is nonempty when the row failed
// and every numeric field is then meaningless.
struct SweepRow {
  int d = 0;
  long long q = 0;
  std::string body;
  double total = 0.0;
  double D_A = 0.0;
  double D_K = 0.0;
  double l2nu = 0.0;
  double l2N = 0.0;
  long long distinct = 0;
  long long support_size = 0;
  double mattila_ratio = 0.0;
  double duality_ratio = 0.0;
  double falconer_lower = 0.0;
  double falconer_upper = 0.0;
  std::string error;
};

// Least-squares slope of log(value) against log(q) per (d, body, statistic),
// computed only when at least three q values produced positive values.
struct SlopeFit {
  int d = 0;
  std::string body;
  std::string stat;
  double slope = 0.0;
};

struct ExperimentReport {
  Config config;
  std::vector<SweepRow> rows;
  std::vector<SlopeFit> slopes;
};

// Least-squares slope of log(value) vs log(q). Needs >= 2 points, all
// coordinates positive.
double fit_slope(std::span<const double> qs, std::span<const double> values);

// Runs the (dims x qs x bodies) sweep. Rows are computed in a fixed order
// and flushed to cfg.out as each finishes; with cfg.resume, rows already
// present in cfg.out are reused instead of recomputed. Failures are recorded
// in the row and the sweep continues.
ExperimentReport run_sweep(const Config& cfg);

void write_report_csv(const ExperimentReport& report, std::ostream& os);
void write_slopes_csv(const ExperimentReport& report, std::ostream& os);

// CSV row round-trip used by the resume path; exposed for tests.
std::string format_row(const SweepRow& row);
SweepRow parse_row(const std::string& line);

} // namespace latlab
