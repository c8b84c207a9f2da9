#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace latlab {

namespace detail {
class BodyImpl;
}

// Outcome of the support maximization. For closed-form bodies the maximizer
// is exact; otherwise it comes from multistart projected gradient ascent.
struct SupportResult {
  double value = 0.0;
  std::vector<double> maximizer; // boundary point attaining x . y
  bool converged = true;
  int iterations = 0;
};

// An origin-symmetric convex body with positive volume. Value type with
// cheap copies; all state is immutable after construction.
//
// gauge(x) is the Minkowski functional (the norm whose unit ball is the
// body); support(x) is sup_{y in body} x . y, which equals the gauge of the
// polar body. dual() returns the polar body; for ball/ellipsoid this is
// again closed-form, otherwise a wrapper whose gauge is this body's support.
class Body {
public:
  static Body ball(int dim);
  static Body ellipsoid(std::vector<double> semi_axes);
  static Body superellipsoid(int exponent, std::vector<double> scales);
  static Body radial_perturbed(int dim, double eps, std::uint64_t seed);

  // Grammar: "ball" | "ellipsoid:a1,...,ad" | "superellipsoid:p:a1,...,ad"
  //        | "radial:eps:seed". dim fixes the ambient dimension and must
  // match any axis list.
  static Body parse(const std::string& spec, int dim);

  int dim() const;
  double volume() const;
  // Radial bounds: inner_radius * ||x|| <= ... the body contains the
  // Euclidean ball of inner_radius and fits in the ball of outer_radius.
  double inner_radius() const;
  double outer_radius() const;

  double gauge(std::span<const double> x) const;
  std::vector<double> gauge_grad(std::span<const double> x) const;

  double support(std::span<const double> x) const;
  SupportResult support_detail(std::span<const double> x) const;

  Body dual() const;

  // Gaussian curvature of the boundary at the point whose outward normal is
  // `normal` (need not be unit length). Finite differences on the support
  // function with Richardson extrapolation; throws on a non-positive
  // determinant.
  double curvature(std::span<const double> normal) const;

  // True when gauge(x)^p = sum_i w_i |x_i|^p; fills p and the weights.
  // Lattice enumeration uses this for exact per-column coordinate ranges.
  bool separable(double& p, std::vector<double>& weights) const;

  std::string to_string() const;

  const detail::BodyImpl& impl() const { return *impl_; }

private:
  explicit Body(std::shared_ptr<const detail::BodyImpl> impl);
  std::shared_ptr<const detail::BodyImpl> impl_;
};

namespace detail {
// Generic support maximization over the boundary, exposed so tests can
// exercise the ascent path even for bodies that have a closed form.
SupportResult support_ascent(const Body& body, std::span<const double> x);
} // namespace detail

} // namespace latlab
