#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "latlab/body.hpp"

namespace latlab {

// Thrown when an enumeration's bounding box exceeds the configured point
// budget; the CLI maps this to its own exit code.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr long long kDefaultPointBudget = 1'000'000'000;

// Counts of nonzero lattice points per gauge annulus [k*delta, (k+1)*delta).
struct ShellHistogram {
  double q = 0.0;
  double delta = 0.0;
  double t_max = 0.0; // histogram covers gauge values in (0, t_max]
  int dim = 0;
  std::vector<long long> counts;
  long long total = 0; // sum of counts

  double t_lo(std::size_t k) const { return static_cast<double>(k) * delta; }
  double t_hi(std::size_t k) const { return static_cast<double>(k + 1) * delta; }
  std::size_t bucket_of(double t) const { return static_cast<std::size_t>(t / delta); }
};

// Exact count of nonzero integer points with gauge(x) <= q.
long long enumerate_count(const Body& body, double q, long long budget = kDefaultPointBudget);

// Bins every nonzero integer point with gauge(x) <= t_max into annuli of
// width delta. t_max <= 0 means t_max = q. Requires delta in [1/(4q), 4/q].
ShellHistogram shell_histogram(const Body& body, double q, double delta, double t_max = 0.0,
                               long long budget = kDefaultPointBudget);

// Number of nonempty buckets: ~1/q-separated distinct gauge distances from
// the origin, up to a bounded factor.
long long distinct_distances(const ShellHistogram& hist);

// Adds counts of two histograms over the same (q, delta, t_max) grid.
ShellHistogram merge_histograms(const ShellHistogram& a, const ShellHistogram& b);

// Sums groups of `factor` adjacent buckets, turning a delta-grid histogram
// into a (factor*delta)-grid one; bucket boundaries align exactly.
ShellHistogram coarsen_histogram(const ShellHistogram& h, int factor);

// CSV dump with header k,t_lo,t_hi,count.
void write_histogram_csv(const ShellHistogram& h, std::ostream& os);

} // namespace latlab
