#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "latlab/body.hpp"
#include "latlab/lattice.hpp"

namespace latlab {

// Per-bucket distance profile built from a shell histogram: the density
// surrogate nu0 = q * count, the cumulative count N0 (origin restored), the
// discrepancy E0 = N0 - t^d vol, and their t^{(1-d)/2}-weighted versions.
struct DistanceProfile {
  double q = 0.0;
  double delta = 0.0;
  int dim = 0;
  double volume = 0.0;
  std::string body;

  std::vector<long long> gamma; // raw bucket counts
  std::vector<double> t;        // bucket midpoints
  std::vector<double> nu0;
  std::vector<double> N0;
  std::vector<double> E0;
  std::vector<double> nu_w;
  std::vector<double> E_w;

  std::size_t q_buckets = 0; // buckets with midpoint <= q
};

DistanceProfile build_profile(const ShellHistogram& hist, const Body& body);

// N0 up to the bucket containing t, minus t^d vol: the sharp counting
// discrepancy evaluated at t itself.
double discrepancy_at(const DistanceProfile& p, double t);

struct L1Mass {
  double mass = 0.0;  // total point count (the Darboux mass at step 1/q)
  double ratio = 0.0; // mass / (vol * q^d)
};
L1Mass l1_mass(const DistanceProfile& p);

struct MeanSquare {
  double D_A = 0.0; // sqrt((1/q^2) sum of squared bucket counts)
  double D_K = 0.0; // sqrt((1/q^2) sum of squared discrepancies)
};
MeanSquare mean_square(const DistanceProfile& p);

// sum over t_k <= q of (t_k^{(1-d)/2} q Gamma_k)^2 delta.
double l2_weighted_nu(const DistanceProfile& p);

struct L2N {
  double value = 0.0;
  double ratio = 0.0; // value / q^{d+2}
};
// Same weighted square sum for N0; rejects d = 2 where it diverges.
L2N l2_weighted_N(const DistanceProfile& p);

struct CauchySchwarz {
  double lhs = 0.0;            // (sum Gamma)^2
  double rhs = 0.0;            // occupied * sum Gamma^2
  long long support_size = 0;  // occupied buckets with t_k <= q
};
CauchySchwarz cauchy_schwarz_support(const DistanceProfile& p);

// max over 1 <= t_k <= q of |E0| / (t^{d-2+2/(d-1)} + t^{d-1}/q).
double landau_ratio(const DistanceProfile& p);

// CSV dump with header t,nu0,N0,E0,nu_w,E_w.
void write_profile_csv(const DistanceProfile& p, std::ostream& os);

} // namespace latlab
