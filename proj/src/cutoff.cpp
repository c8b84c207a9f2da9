#include "latlab/cutoff.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "latlab/bessel.hpp"
#include "latlab/quadrature.hpp"

namespace latlab {

namespace {

// Shoulder profile on (0, 1): 1 at 0, 0 at 1, all derivatives vanish at both
// ends. Built from g(t) = exp(-1/t).
double shoulder(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  auto g = [](double t) { return std::exp(-1.0 / t); };
  const double a = g(1.0 - u);
  const double b = g(u);
  return a / (a + b);
}

// Unnormalized bump profile: plateau of height 1 on [0, r0], shoulder on
// [r0, 2 r0], zero beyond.
double raw_bump(double s, double r0) {
  if (s <= r0) return 1.0;
  if (s >= 2.0 * r0) return 0.0;
  return shoulder(s / r0 - 1.0);
}

double sphere_area_of(int d) {
  return 2.0 * std::pow(std::acos(-1.0), 0.5 * d) / std::tgamma(0.5 * d);
}

} // namespace

Cutoff::Cutoff(int dim, double r0, double grid_step, double r_max)
    : dim_(dim), r0_(r0), step_(grid_step), r_max_(r_max) {
  if (dim < 2 || dim > 8) throw std::invalid_argument("Cutoff: dimension out of range");
  if (!(r0 > 0.0) || !(r0 < 10.0)) throw std::invalid_argument("Cutoff: bump radius out of range");
  if (!(grid_step > 0.0) || !(r_max > 4.0 * grid_step))
    throw std::invalid_argument("Cutoff: bad sample grid");

  const double pi = std::acos(-1.0);
  const double hi = 2.0 * r0;
  const double nu = 0.5 * dim - 1.0;

  // Unit total mass: integral of phi over R^d equals
  // sphere_area * integral of phi(s) s^{d-1} ds.
  const double radial_mass = integrate_composite(
      [&](double s) { return raw_bump(s, r0) * std::pow(s, dim - 1); }, 0.0, hi, 16, 32);
  amplitude_ = 1.0 / (sphere_area_of(dim) * radial_mass);

  // Radial transform: psi(r) = 2 pi * int phi(s) jt_nu(2 pi r s) (2 pi s)^nu
  // s^{d/2} ds, smooth through r = 0. Panel count tracks the oscillation
  // count r * hi of the kernel.
  auto transform_at = [&](double r, int extra_panels) {
    const int panels = 16 + extra_panels + static_cast<int>(std::ceil(r * hi / 1.5));
    return 2.0 * pi *
           integrate_composite(
               [&](double s) {
                 return amplitude_ * raw_bump(s, r0) * bessel_jt(nu, 2.0 * pi * r * s) *
                        std::pow(2.0 * pi * s, nu) * std::pow(s, 0.5 * dim);
               },
               0.0, hi, panels, 16);
  };

  // Convergence certificate at probe radii: doubling the panel count must
  // not move the value.
  for (double probe : {0.0, 1.7, 11.3, 37.1, r_max}) {
    const double coarse = transform_at(probe, 0);
    const double fine = transform_at(probe, 16 + static_cast<int>(std::ceil(probe * hi / 1.5)));
    if (std::abs(fine - coarse) > 1e-11 * (1.0 + std::abs(fine)))
      throw std::runtime_error("Cutoff: radial transform quadrature did not converge");
  }

  const auto n = static_cast<std::size_t>(std::floor(r_max / step_)) + 1;
  samples_.resize(n);
  for (std::size_t i = 0; i < n; ++i) samples_[i] = transform_at(step_ * static_cast<double>(i), 0);

  // Pin psi(0) = 1 exactly; phi is rescaled by the same factor so the pair
  // stays a transform pair.
  const double scale = 1.0 / samples_[0];
  for (auto& v : samples_) v *= scale;
  amplitude_ *= scale;

  for (std::size_t i = 0; i < n; ++i) {
    const double r = step_ * static_cast<double>(i);
    const double bound = std::abs(samples_[i]) * std::pow(1.0 + r, decay_order);
    if (bound > c_decay_) c_decay_ = bound;
  }
}

double Cutoff::bump(double s) const { return amplitude_ * raw_bump(std::abs(s), r0_); }

double Cutoff::psi(double r) const {
  r = std::abs(r);
  const double pos = r / step_;
  const auto n = samples_.size();
  if (pos >= static_cast<double>(n - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  // Catmull-Rom through the four surrounding samples; clamp ends.
  const double p1 = samples_[i];
  const double p2 = samples_[i + 1];
  const double p0 = i > 0 ? samples_[i - 1] : p1;
  const double p3 = i + 2 < n ? samples_[i + 2] : p2;
  const double a = 2.0 * p1;
  const double b = p2 - p0;
  const double c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  const double d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
  return 0.5 * (a + b * t + c * t * t + d * t * t * t);
}

double Cutoff::truncation_radius(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("truncation_radius: eps must be positive");
  double suffix_max = 0.0;
  std::size_t first_small = samples_.size();
  for (std::size_t i = samples_.size(); i-- > 0;) {
    suffix_max = std::max(suffix_max, std::abs(samples_[i]));
    if (suffix_max >= eps) break;
    first_small = i;
  }
  if (first_small == samples_.size()) return r_max_;
  return step_ * static_cast<double>(first_small);
}

Cutoff build_cutoff(int dim, double r0, double grid_step, double r_max) {
  return Cutoff(dim, r0, grid_step, r_max);
}

const Cutoff& shared_cutoff(int dim, double r0) {
  static std::mutex mu;
  static std::map<std::pair<int, std::int64_t>, std::unique_ptr<Cutoff>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(dim, std::llround(r0 * 1e9));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Cutoff>(dim, r0)).first;
  return *it->second;
}

} // namespace latlab
