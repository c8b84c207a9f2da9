#include "latlab/falconer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <utility>
#include <vector>

namespace latlab {

namespace {

// Distances are deduplicated on a grid much finer than the smearing width,
// so quantization moves the interval union by a vanishing fraction of it.
// The grid never exceeds ~4e8 cells; past that the quantum widens and the
// merge error stays below range^2 / (8e8 * radius).
double distance_quantum(double range, double radius) {
  return std::max(radius * 1e-4, range / 4e8);
}

} // namespace

FalconerStage make_stage(long long q, double s, const Body& body) {
  const int d = body.dim();
  if (q < 2) throw std::invalid_argument("FalconerStage: q must be at least 2");
  if (!(s > 0.0) || s > static_cast<double>(d))
    throw std::invalid_argument("FalconerStage: s must lie in (0, d]");
  FalconerStage st{q, s, d, std::pow(static_cast<double>(q), -static_cast<double>(d) / s), body};
  return st;
}

namespace {

// Ascending sweep over the set bits merges the smeared intervals without
// materializing them. Returns (total length, set-bit count).
std::pair<double, long long> sweep_union(const std::vector<std::uint64_t>& seen, double quantum,
                                         double beta) {
  double measure = 0.0;
  long long distinct = 0;
  double lo = 0.0, hi = -1.0;
  for (std::size_t w = 0; w < seen.size(); ++w) {
    std::uint64_t bits = seen[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      ++distinct;
      const double t = static_cast<double>(w * 64 + static_cast<std::size_t>(b)) * quantum;
      const double a = std::max(t - 2.0 * beta, 0.0);
      if (hi < lo) {
        lo = a;
        hi = t + 2.0 * beta;
      } else if (a <= hi) {
        hi = t + 2.0 * beta;
      } else {
        measure += hi - lo;
        lo = a;
        hi = t + 2.0 * beta;
      }
    }
  }
  if (hi >= lo) measure += hi - lo;
  return {measure, distinct};
}

} // namespace

DistanceSetMeasure distance_set_measure(const FalconerStage& stage, long long budget) {
  const int d = stage.d;
  const auto q = stage.q;
  const double beta = stage.ball_radius;
  const long long bound = 2 * q; // differences of centers lie in 2B
  double box = 1.0;
  for (int i = 0; i < d; ++i) box *= 2.0 * static_cast<double>(bound) + 1.0;
  if (box > static_cast<double>(budget)) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "distance set needs %.3g candidate points, budget is %lld", box,
                  budget);
    throw BudgetError(msg);
  }

  const double range = 2.0 / stage.body.inner_radius(); // largest gauge/q possible
  const double quantum = distance_quantum(range, beta);
  const auto cells = static_cast<std::size_t>(range / quantum) + 2;
  std::vector<std::uint64_t> seen_upper((cells + 63) / 64, 0);
  std::vector<std::uint64_t> seen_lower((cells + 63) / 64, 0);

  // One representative per +-pair (the gauge is even), plus the origin.
  std::vector<long long> c(static_cast<std::size_t>(d), -bound);
  std::vector<double> x(static_cast<std::size_t>(d));
  const double qq = static_cast<double>(q) * static_cast<double>(q);
  bool done = false;
  while (!done) {
    int first_nonzero = -1;
    for (int i = 0; i < d; ++i)
      if (c[static_cast<std::size_t>(i)] != 0) {
        first_nonzero = i;
        break;
      }
    if (first_nonzero < 0 || c[static_cast<std::size_t>(first_nonzero)] > 0) {
      double n2 = 0.0;
      for (int i = 0; i < d; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<double>(c[static_cast<std::size_t>(i)]);
        n2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      }
      if (n2 <= 4.0 * qq) {
        const double t = stage.body.gauge(x) / static_cast<double>(q);
        const auto cell = static_cast<std::size_t>(std::llround(t / quantum));
        seen_upper[cell / 64] |= std::uint64_t{1} << (cell % 64);
        if (n2 <= qq) seen_lower[cell / 64] |= std::uint64_t{1} << (cell % 64);
      }
    }
    for (int i = 0;; ++i) {
      if (i == d) {
        done = true;
        break;
      }
      auto& ci = c[static_cast<std::size_t>(i)];
      if (++ci <= bound) break;
      ci = -bound;
    }
  }

  DistanceSetMeasure out;
  const auto [upper, distinct] = sweep_union(seen_upper, quantum, beta);
  out.upper = upper;
  out.distinct = distinct;
  out.lower = sweep_union(seen_lower, quantum, beta).first;
  return out;
}

std::vector<FalconerStage> stage_sequence(long long q0, GrowthRule rule, int count, double s,
                                          const Body& body) {
  if (count < 1) throw std::invalid_argument("stage_sequence: count must be positive");
  std::vector<FalconerStage> stages;
  long long q = q0;
  for (int i = 1; i <= count; ++i) {
    stages.push_back(make_stage(q, s, body));
    if (i == count) break;
    if (rule == GrowthRule::geometric) {
      q *= 4;
    } else {
      // Smallest next stage that both exceeds q^i and at least doubles;
      // from 2 this instantiates as 2, 4, 17, ...
      double power = 1.0;
      for (int j = 0; j < i; ++j) power *= static_cast<double>(q);
      if (power > 1e15) throw std::invalid_argument("stage_sequence: literal growth overflows");
      q = std::max(static_cast<long long>(power) + 1, 2 * q);
    }
  }
  return stages;
}

} // namespace latlab
