#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latlab/bessel.hpp"

using latlab::bessel_j;
using latlab::bessel_jt;

namespace {

// Independent oracle for integer orders: Miller's downward recurrence with
// the sum rule J_0 + 2 J_2 + 2 J_4 + ... = 1. Shares no code path with the
// implementation (which uses series / integral representation / asymptotics).
double miller_j(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  int start = static_cast<int>(x + 40 + 12 * std::cbrt(x + 1));
  if (start % 2 == 1) ++start;
  double jp = 0.0, j = 1e-300, target = 0.0, norm = 0.0;
  for (int k = start; k >= 1; --k) {
    double jm = (2.0 * k / x) * j - jp;
    jp = j;
    j = jm;
    if (k - 1 == n) target = j;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? j : 2.0 * j;
    // Rescale to dodge overflow on long recurrences.
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp *= 1e-250;
      target *= 1e-250;
      norm *= 1e-250;
    }
  }
  return target / norm;
}

double bisect_zero(double (*f)(double), double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double j1_wrap(double x) { return bessel_j(1, x); }
double j1_miller_wrap(double x) { return miller_j(1, x); }

} // namespace

TEST_CASE("integer orders match the Miller oracle across all regimes") {
  for (int n = 0; n <= 6; ++n) {
    for (double x : {0.1, 0.5, 1.0, 3.0, 7.7, 11.9, 12.1, 20.0, 35.0, 49.9, 50.1, 80.0, 200.0}) {
      double ref = miller_j(n, x);
      double got = bessel_j(n, x);
      // Envelope-relative beyond 50, absolute below.
      double tol = x <= 50.0 ? 1e-10 : 1e-8 * std::sqrt(2.0 / (M_PI * x)) + 1e-12;
      CHECK(std::abs(got - ref) <= tol);
    }
  }
}

TEST_CASE("series and closed forms agree for half-integers at the regime seam") {
  // x = 12 is served by the series; the trig forms are exact there too.
  double x = 12.0;
  double amp = std::sqrt(2.0 / (M_PI * x));
  CHECK(std::abs(bessel_j(0.5, x) - amp * std::sin(x)) < 1e-11);
  CHECK(std::abs(bessel_j(1.5, x) - amp * (std::sin(x) / x - std::cos(x))) < 1e-11);
  double j52 = amp * ((3.0 / (x * x) - 1.0) * std::sin(x) - 3.0 / x * std::cos(x));
  CHECK(std::abs(bessel_j(2.5, x) - j52) < 1e-11);
}

TEST_CASE("J_{1/2}(pi/2) = 2/pi") {
  CHECK(bessel_j(0.5, M_PI / 2) == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
  CHECK(std::abs(bessel_j(0.5, M_PI / 2) - 0.636620) < 1e-6);
}

TEST_CASE("half-integer values match the explicit trig forms") {
  for (double x : {0.3, 2.0, 9.0, 15.0, 33.3, 70.0}) {
    double amp = std::sqrt(2.0 / (M_PI * x));
    CHECK(std::abs(bessel_j(0.5, x) - amp * std::sin(x)) < 1e-11);
    CHECK(std::abs(bessel_j(1.5, x) - amp * (std::sin(x) / x - std::cos(x))) < 1e-11);
    double j52 = amp * ((3.0 / (x * x) - 1.0) * std::sin(x) - 3.0 / x * std::cos(x));
    CHECK(std::abs(bessel_j(2.5, x) - j52) < 1e-10);
  }
}

TEST_CASE("first positive zero of J_1") {
  double z = bisect_zero(j1_wrap, 3.0, 4.5);
  double z_ref = bisect_zero(j1_miller_wrap, 3.0, 4.5);
  CHECK(std::abs(z - z_ref) < 1e-9);
  CHECK(std::abs(z - 3.83171) < 2e-5);
}

TEST_CASE("three-term recurrence holds across orders and arguments") {
  for (double v = 1.0; v <= 5.0; v += 0.5) {
    for (double x = 0.5; x <= 120.0; x *= 1.7) {
      double lhs = bessel_j(v - 1, x) + bessel_j(v + 1, x);
      double rhs = (2.0 * v / x) * bessel_j(v, x);
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("jt is the finite ratio J_v / x^v") {
  CHECK(bessel_jt(0, 0.0) == doctest::Approx(1.0));
  CHECK(bessel_jt(1, 0.0) == doctest::Approx(0.5));
  CHECK(bessel_jt(0.5, 0.0) == doctest::Approx(1.0 / (std::sqrt(2.0) * std::tgamma(1.5))));
  for (double v : {0.0, 0.5, 1.0, 2.0}) {
    for (double x : {0.7, 5.0, 20.0}) {
      CHECK(bessel_jt(v, x) == doctest::Approx(bessel_j(v, x) / std::pow(x, v)).epsilon(1e-10));
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS((void)bessel_j(0.3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)bessel_j(9.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)bessel_j(1.0, -0.5), std::invalid_argument);
}
