#pragma once

#include <vector>

#include "latlab/body.hpp"
#include "latlab/lattice.hpp"

namespace latlab {

// One stage of the speck construction: Euclidean balls of radius q^{-d/s}
// centered at the scaled lattice (1/q) Z^d inside the unit ball, with
// distances measured by `body`. Requires q >= 2 and s in (0, d]; the
// radius then lies in (0, 1).
struct FalconerStage {
  long long q = 0;
  double s = 0.0;
  int d = 0;
  double ball_radius = 0.0;
  Body body;
};

FalconerStage make_stage(long long q, double s, const Body& body);

// Lebesgue measure of the stage's distance set, via origin distances of the
// integer lattice smeared by +-2 ball_radius and merged into disjoint
// intervals. The difference set of Z^d within qB sits between Z^d within qB
// and Z^d within 2qB, so the measure is bracketed two-sidedly: `lower` uses
// the q ball, `upper` the 2q ball. `distinct` counts the deduplicated
// distances behind the upper envelope.
struct DistanceSetMeasure {
  double lower = 0.0;
  double upper = 0.0;
  long long distinct = 0;
};
DistanceSetMeasure distance_set_measure(const FalconerStage& stage,
                                        long long budget = kDefaultPointBudget);

enum class GrowthRule {
  literal,  // next q is the smallest integer both above q_i^i and >= 2 q_i
  geometric // q multiplies by 4 each stage
};

std::vector<FalconerStage> stage_sequence(long long q0, GrowthRule rule, int count, double s,
                                          const Body& body);

} // namespace latlab
