#pragma once

#include <functional>
#include <vector>

namespace latlab {

// A radial function sampled on a log-uniform grid of positive radii, with
// piecewise-cubic interpolation between samples. Outside the grid the
// function is treated as zero.
struct RadialSamples {
  std::vector<double> r;
  std::vector<double> value;

  double at(double x) const;
  // sqrt of the integral of the squared interpolant over the grid span;
  // exact for the piecewise cubic.
  double l2_norm() const;
};

RadialSamples sample_log_grid(const std::function<double(double)>& fn, double r_min, double r_max,
                              int n);

// H[f](r) = int sqrt(rt) J_v(rt) f(t) dt on f's own grid, so the transform
// can be iterated; an L2 isometry and self-inverse up to quadrature error.
// Requires half-integer v in [0, 8] and a tail certificate: the last
// samples must have decayed below 1e-6 of the peak.
RadialSamples hankel_transform(const RadialSamples& f, double v);

} // namespace latlab
