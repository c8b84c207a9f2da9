#pragma once

#include <functional>
#include <vector>

namespace latlab {

// Gauss-Legendre nodes and weights on [-1, 1], computed once per order by
// Newton iteration on the Legendre recurrence and cached.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);

// Single Gauss-Legendre panel on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Composite Gauss-Legendre with equal panels on [a, b].
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int n = 16);

// Adaptive bisection: a panel is accepted when one GL pass and its two-half
// refinement agree to the requested tolerances. max_intervals caps work on
// integrands that fail to settle.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_intervals = 1 << 16);

// Trapezoid rule for one full period of a periodic function: spectrally
// accurate for smooth periodic integrands.
double integrate_periodic(const std::function<double(double)>& f, double a, double b, int n);

} // namespace latlab
