#include "latlab/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace latlab {

namespace {

void check_order(double v) {
  double two_v = 2.0 * v;
  if (v < 0.0 || v > 8.0 || two_v != std::floor(two_v)) {
    throw std::invalid_argument("bessel_j: order must be a half-integer in [0, 8]");
  }
}

// Ascending series of J_v(x) / x^v; converges fast and without harmful
// cancellation for x <= 12 at these orders.
double series_jt(double v, double x) {
  double q = 0.25 * x * x;
  double term = 1.0 / (std::pow(2.0, v) * std::tgamma(v + 1.0));
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (m * (m + v));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt. The integrand extends to
// an even 2*pi-periodic function, so the trapezoid sum converges
// geometrically once the node count passes x + O(x^{1/3}).
double integral_rep(int n, double x) {
  int nodes = static_cast<int>(std::ceil(x + 12.0 * std::cbrt(x + 1.0) + 30.0));
  double h = M_PI / nodes;
  double sum = 0.5 * (std::cos(0.0) + std::cos(n * M_PI));
  for (int k = 1; k < nodes; ++k) {
    double t = k * h;
    sum += std::cos(n * t - x * std::sin(t));
  }
  return sum * h / M_PI;
}

// Hankel's large-argument expansion. Terms fall fast for x > 50 at these
// orders; stop at the smallest term.
double asymptotic(double v, double x) {
  double mu = 4.0 * v * v;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = INFINITY;
  for (int k = 1; k <= 10; ++k) {
    term *= (mu - (2 * k - 1) * (2 * k - 1)) / (k * 8.0 * x);
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    if (k % 2 == 1) {
      q += (k % 4 == 1) ? term : -term;
    } else {
      p += (k % 4 == 2) ? -term : term;
    }
    if (std::abs(term) < 1e-17) break;
  }
  double chi = x - (0.5 * v + 0.25) * M_PI;
  return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Exact closed forms for half-odd-integer orders: upward recurrence from
// J_{1/2}, J_{3/2}; stable here because x > 12 >= v.
double half_integer_closed(double v, double x) {
  double s = std::sin(x), c = std::cos(x);
  double amp = std::sqrt(2.0 / (M_PI * x));
  double jm = amp * s;               // J_{1/2}
  if (v == 0.5) return jm;
  double j = amp * (s / x - c);      // J_{3/2}
  for (double w = 1.5; w < v; w += 1.0) {
    double jn = (2.0 * w / x) * j - jm;
    jm = j;
    j = jn;
  }
  return j;
}

} // namespace

double bessel_j(double v, double x) {
  check_order(v);
  if (x < 0.0) throw std::invalid_argument("bessel_j: x must be >= 0");
  if (x <= 12.0) return series_jt(v, x) * std::pow(x, v);
  bool half = (std::floor(v) != v);
  if (half) return half_integer_closed(v, x);
  if (x <= 50.0) return integral_rep(static_cast<int>(v), x);
  return asymptotic(v, x);
}

double bessel_jt(double v, double x) {
  check_order(v);
  if (x < 0.0) throw std::invalid_argument("bessel_jt: x must be >= 0");
  if (x <= 12.0) return series_jt(v, x);
  return bessel_j(v, x) / std::pow(x, v);
}

} // namespace latlab
