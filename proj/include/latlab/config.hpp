#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "latlab/lattice.hpp"

namespace latlab {

// Sweep and check settings read from a flat key = value text file. Lists are
// comma separated; `body=` may repeat, one spec per line; `#` starts a
// comment. Unknown keys are errors so typos cannot silently change a run.
struct Config {
  std::vector<int> dims;            // dims=2,3,4
  std::vector<long long> qs;        // qs=8,16,32
  std::vector<std::string> bodies;  // body=ball  body=ellipsoid:2,1
  long long delta_denominator = 2;  // annulus width 1/(delta_denominator * q)
  long long budget = kDefaultPointBudget;
  int threads = 0;                  // 0: hardware default
  unsigned long long seed = 0;      // echoed in report headers
  bool mattila = false;             // add the mattila/l2nu column (d = 3 rows)
  bool duality = false;             // add the duality ratio column
  double falconer_s = 0.0;          // > 0 adds distance-set measure columns
  std::string out;                  // report path; empty writes nothing
  bool resume = false;              // reuse finished rows already in `out`
  std::vector<int> criteria;        // check subset; `criteria=none` selects none
  bool criteria_set = false;        // false: the key was absent, check runs all
  double corrupt_volume = 1.0;      // negative-control hook, scales Vol K
};

Config parse_config(std::istream& in);
Config load_config(const std::string& path);

} // namespace latlab
