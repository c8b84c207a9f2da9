#pragma once

#include <vector>

namespace latlab {

// Smooth compactly supported radial bump phi (plateau on [0, r0], C-infinity
// shoulder vanishing at 2*r0, total mass 1) together with its radial Fourier
// transform psi, sampled once on a uniform grid and interpolated. psi(0) = 1
// exactly by normalization.
class Cutoff {
public:
  Cutoff(int dim, double r0, double grid_step = 0.02, double r_max = 120.0);

  int dim() const { return dim_; }
  double r0() const { return r0_; }
  double support_radius() const { return 2.0 * r0_; } // of phi
  double grid_max() const { return r_max_; }

  // The bump profile phi(s) (radial value, normalized to unit total mass).
  double bump(double s) const;

  // The transform profile psi(r); even in r, zero beyond the sampled range.
  double psi(double r) const;
  double operator()(double r) const { return psi(r); }

  // Certificate: |psi(r)| <= decay_constant * (1+r)^{-decay_order} holds at
  // every sample.
  static constexpr int decay_order = 6;
  double decay_constant() const { return c_decay_; }

  // Smallest sampled radius past which every sample satisfies |psi| < eps.
  double truncation_radius(double eps) const;

private:
  int dim_;
  double r0_;
  double step_;
  double r_max_;
  double amplitude_ = 1.0; // bump plateau height after normalization
  std::vector<double> samples_;
  double c_decay_ = 0.0;
};

Cutoff build_cutoff(int dim, double r0, double grid_step = 0.02, double r_max = 120.0);

// Process-wide cache of default-grid cutoffs.
const Cutoff& shared_cutoff(int dim, double r0 = 0.45);

} // namespace latlab
