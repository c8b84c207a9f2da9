#pragma once

#include <complex>
#include <span>

#include "latlab/body.hpp"

namespace latlab {

// Which measure attached to the body is transformed: the boundary surface
// measure or the indicator of the solid.
enum class FtKind { surface, indicator };

// Transform profiles of the unit Euclidean ball as functions of the radial
// frequency r = |xi|. ft_ball_surface(d, 0) is the sphere area,
// ft_ball_indicator(d, 0) the ball volume.
double ft_ball_surface(int dim, double r);
double ft_ball_indicator(int dim, double r);

// Indicator transform of the axis-aligned ellipsoid (no closed surface
// analogue exists).
double ft_ellipsoid_indicator(std::span<const double> axes, std::span<const double> xi);

// Direct oscillatory quadrature of the transform, resolving at least 20
// nodes per oscillation. Only dimensions 2 and 3, |xi| <= 50; throws
// runtime_error when the node budget would be exceeded.
std::complex<double> ft_body_direct(const Body& K, std::span<const double> xi, FtKind kind);

// Stationary-phase approximation valid for |xi| > 1. terms = 1 is the
// leading term (exact for balls and, in indicator mode, ellipsoids);
// terms = 2 adds a correction whose scalar coefficient is fitted once per
// body against ft_body_direct on a calibration band and cached.
double ft_body_asymptotic(const Body& K, std::span<const double> xi, FtKind kind, int terms = 1);

} // namespace latlab
