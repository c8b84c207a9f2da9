#pragma once

namespace latlab {

// Bessel function of the first kind J_v(x) for x >= 0 and half-integer
// orders v in {0, 1/2, 1, ..., 8}. Regimes:
//   x <= 12          ascending power series
//   x  > 12, 2v odd  exact trig closed forms via upward recurrence
//   12 < x <= 50     integral representation, periodic trapezoid
//   x  > 50          Hankel asymptotic expansion
// Absolute accuracy ~1e-12 for x <= 50; relative to the envelope
// sqrt(2/(pi x)) ~1e-10 beyond.
double bessel_j(double v, double x);

// J_v(x) / x^v, finite at x = 0 (value 1 / (2^v Gamma(v+1))). Safe kernel
// for radial transforms near zero frequency.
double bessel_jt(double v, double x);

} // namespace latlab
