#include "latlab/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "latlab/bessel.hpp"
#include "latlab/parallel.hpp"
#include "latlab/quadrature.hpp"

namespace latlab {

namespace {

// Index of x on the log-uniform grid, fractional. Grid spacing is uniform
// in log r, so no search is needed.
double log_index(const RadialSamples& f, double x) {
  const double step = std::log(f.r[1] / f.r[0]);
  return std::log(x / f.r[0]) / step;
}

double catmull_rom(const std::vector<double>& v, double u) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  auto idx = static_cast<std::ptrdiff_t>(std::floor(u));
  idx = std::clamp<std::ptrdiff_t>(idx, 0, n - 2);
  const double s = u - static_cast<double>(idx);
  const auto pick = [&](std::ptrdiff_t i) { return v[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))]; };
  const double p0 = pick(idx - 1), p1 = pick(idx), p2 = pick(idx + 1), p3 = pick(idx + 2);
  const double a = 2.0 * p1;
  const double b = p2 - p0;
  const double c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  const double d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
  return 0.5 * (a + s * (b + s * (c + s * d)));
}

void check_grid(const RadialSamples& f) {
  if (f.r.size() < 8 || f.r.size() != f.value.size())
    throw std::invalid_argument("RadialSamples: need at least 8 matching samples");
  if (!(f.r.front() > 0.0)) throw std::invalid_argument("RadialSamples: radii must be positive");
  const double step = std::log(f.r[1] / f.r[0]);
  if (!(step > 0.0)) throw std::invalid_argument("RadialSamples: radii must increase");
  for (std::size_t k = 1; k < f.r.size(); ++k) {
    const double s = std::log(f.r[k] / f.r[k - 1]);
    if (std::abs(s - step) > 1e-9 * step)
      throw std::invalid_argument("RadialSamples: grid is not log-uniform");
  }
}

} // namespace

double RadialSamples::at(double x) const {
  if (r.empty() || x < r.front() || x > r.back()) return 0.0;
  return catmull_rom(value, log_index(*this, x));
}

double RadialSamples::l2_norm() const {
  check_grid(*this);
  const GaussRule& rule = gauss_legendre(4); // exact for the squared cubic
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    const double w = r[k + 1] - r[k];
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double t = r[k] + 0.5 * w * (rule.x[i] + 1.0);
      const double v = at(t);
      acc += 0.5 * w * rule.w[i] * v * v;
    }
  }
  return std::sqrt(acc);
}

RadialSamples sample_log_grid(const std::function<double(double)>& fn, double r_min, double r_max,
                              int n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n < 8)
    throw std::invalid_argument("sample_log_grid: need 0 < r_min < r_max and n >= 8");
  RadialSamples out;
  out.r.resize(static_cast<std::size_t>(n));
  out.value.resize(static_cast<std::size_t>(n));
  const double step = std::log(r_max / r_min) / (n - 1);
  for (int k = 0; k < n; ++k) {
    out.r[static_cast<std::size_t>(k)] = r_min * std::exp(step * k);
    out.value[static_cast<std::size_t>(k)] = fn(out.r[static_cast<std::size_t>(k)]);
  }
  out.r.back() = r_max; // pin the endpoint against rounding drift
  return out;
}

RadialSamples hankel_transform(const RadialSamples& f, double v) {
  check_grid(f);
  const double twice = 2.0 * v;
  if (!(v >= 0.0) || v > 8.0 || twice != std::floor(twice))
    throw std::invalid_argument("hankel_transform: order must be half-integer in [0, 8]");

  double peak = 0.0;
  for (double x : f.value) peak = std::max(peak, std::abs(x));
  double tail = 0.0;
  for (std::size_t k = f.value.size() - 3; k < f.value.size(); ++k)
    tail = std::max(tail, std::abs(f.value[k]));
  if (tail > 1e-6 * peak)
    throw std::invalid_argument("hankel_transform: samples have not decayed; no tail certificate");

  RadialSamples out;
  out.r = f.r;
  out.value.assign(f.r.size(), 0.0);
  if (peak == 0.0) return out;

  const auto n_out = static_cast<std::int64_t>(f.r.size());
  parallel_chunks(n_out, std::max<std::int64_t>(1, n_out / 64),
                  [&](std::size_t, std::int64_t b, std::int64_t e) {
                    for (std::int64_t j = b; j < e; ++j) {
                      const double r = out.r[static_cast<std::size_t>(j)];
                      double acc = 0.0;
                      // Segment-wise Gauss keeps the interpolant's seams on
                      // panel edges; subpanels track the phase r*width so
                      // coarse grids at large r stay resolved.
                      for (std::size_t k = 0; k + 1 < f.r.size(); ++k) {
                        const double w = f.r[k + 1] - f.r[k];
                        const int sub = 1 + static_cast<int>(r * w / 4.0);
                        const GaussRule& rule = gauss_legendre(r * w <= 2.0 ? 8 : 16);
                        for (int s = 0; s < sub; ++s) {
                          const double a = f.r[k] + w * s / sub;
                          const double ws = w / sub;
                          for (std::size_t i = 0; i < rule.x.size(); ++i) {
                            const double t = a + 0.5 * ws * (rule.x[i] + 1.0);
                            const double u = catmull_rom(f.value, log_index(f, t));
                            acc += 0.5 * ws * rule.w[i] * std::sqrt(r * t) * bessel_j(v, r * t) * u;
                          }
                        }
                      }
                      out.value[static_cast<std::size_t>(j)] = acc;
                    }
                  });
  return out;
}

} // namespace latlab
