#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "latlab/body.hpp"

using latlab::Body;

namespace {

// Independent support oracle: maximize x . u / gauge(u) over a dense
// direction grid. No ascent, no gradients; accuracy set by grid spacing.
double support_grid_2d(const Body& K, std::span<const double> x, int n = 200000) {
  double best = -1e300;
  std::vector<double> u(2);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * M_PI * i / n;
    u[0] = std::cos(a);
    u[1] = std::sin(a);
    best = std::max(best, (x[0] * u[0] + x[1] * u[1]) / K.gauge(u));
  }
  return best;
}

double support_fib_3d(const Body& K, std::span<const double> x, int n = 300000) {
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  double best = -1e300;
  std::vector<double> u(3);
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double p = ga * i;
    u[0] = r * std::cos(p);
    u[1] = r * std::sin(p);
    u[2] = z;
    best = std::max(best, (x[0] * u[0] + x[1] * u[1] + x[2] * u[2]) / K.gauge(u));
  }
  return best;
}

// Planar curvature oracle from the polar parameterization of the boundary,
// rho(alpha) = 1/gauge(cos a, sin a): kappa = (r^2 + 2r'^2 - r r'') /
// (r^2 + r'^2)^{3/2}, derivatives by central differences.
double curvature_polar_2d(const Body& K, double alpha) {
  auto rho = [&](double a) {
    std::vector<double> u{std::cos(a), std::sin(a)};
    return 1.0 / K.gauge(u);
  };
  const double h = 1e-5;
  double r = rho(alpha);
  double rp = (rho(alpha + h) - rho(alpha - h)) / (2.0 * h);
  double rpp = (rho(alpha + h) - 2.0 * r + rho(alpha - h)) / (h * h);
  return (r * r + 2.0 * rp * rp - r * rpp) / std::pow(r * r + rp * rp, 1.5);
}

// At the boundary point of angle alpha, the outward normal is the gauge
// gradient there.
std::vector<double> normal_at_2d(const Body& K, double alpha) {
  std::vector<double> p{std::cos(alpha), std::sin(alpha)};
  double g = K.gauge(p);
  p[0] /= g;
  p[1] /= g;
  return K.gauge_grad(p);
}

double ball_volume(int d) { return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

// Closed-form volume of {sum |x_i/a_i|^p <= 1}.
double superellipsoid_volume(int d, int p, const std::vector<double>& a) {
  double v = std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), d) / std::tgamma(1.0 + double(d) / p);
  for (double ai : a) v *= ai;
  return v;
}

std::vector<double> random_point(std::mt19937_64& rng, int d, double scale = 1.0) {
  std::normal_distribution<double> g;
  std::vector<double> x(d);
  for (double& v : x) v = scale * g(rng);
  return x;
}

} // namespace

TEST_CASE("gauge homogeneity and positivity") {
  std::mt19937_64 rng(11);
  std::vector<Body> bodies{
      Body::ball(3),
      Body::ellipsoid({2.0, 1.0, 0.7}),
      Body::superellipsoid(4, {1.0, 1.5, 0.8}),
      Body::radial_perturbed(3, 0.05, 42),
      Body::superellipsoid(4, {1.0, 1.5, 0.8}).dual(),
  };
  for (const auto& K : bodies) {
    for (int trial = 0; trial < 20; ++trial) {
      auto x = random_point(rng, K.dim(), 2.0);
      double g = K.gauge(x);
      CHECK(g > 0.0);
      for (double lam : {0.25, 3.7}) {
        auto y = x;
        for (double& v : y) v *= lam;
        CHECK(K.gauge(y) == doctest::Approx(lam * g).epsilon(1e-11));
      }
      // Triangle inequality (convexity of the gauge).
      auto z = random_point(rng, K.dim(), 2.0);
      auto s = x;
      for (int i = 0; i < K.dim(); ++i) s[i] += z[i];
      CHECK(K.gauge(s) <= K.gauge(x) + K.gauge(z) + 1e-9);
    }
    std::vector<double> zero(K.dim(), 0.0);
    CHECK(K.gauge(zero) == 0.0);
  }
}

TEST_CASE("gauge gradient matches finite differences") {
  std::mt19937_64 rng(12);
  std::vector<Body> bodies{
      Body::ball(2),
      Body::ellipsoid({2.0, 1.0}),
      Body::superellipsoid(6, {1.0, 0.9}),
      Body::radial_perturbed(2, 0.08, 7),
      Body::ellipsoid({2.0, 1.0, 0.5}).dual(),
  };
  for (const auto& K : bodies) {
    for (int trial = 0; trial < 12; ++trial) {
      auto x = random_point(rng, K.dim(), 1.5);
      if (K.gauge(x) < 0.3) continue;
      auto grad = K.gauge_grad(x);
      const double h = 1e-6;
      for (int i = 0; i < K.dim(); ++i) {
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fd = (K.gauge(xp) - K.gauge(xm)) / (2.0 * h);
        CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_CASE("support matches a dense direction grid") {
  std::mt19937_64 rng(13);
  SUBCASE("plane") {
    std::vector<Body> bodies{
        Body::ellipsoid({2.0, 1.0}),
        Body::superellipsoid(4, {1.0, 1.5}),
        Body::radial_perturbed(2, 0.1, 5),
        Body::superellipsoid(4, {1.0, 1.5}).dual(),
    };
    for (const auto& K : bodies) {
      bool cheap_gauge = K.to_string().rfind("dual(", 0) != 0;
      int n = cheap_gauge ? 200000 : 20000;
      for (int trial = 0; trial < 6; ++trial) {
        auto x = random_point(rng, 2, 3.0);
        double oracle = support_grid_2d(K, x, n);
        CHECK(K.support(x) == doctest::Approx(oracle).epsilon(1e-5));
        CHECK(K.support(x) >= oracle - 1e-10); // grid can only undershoot
      }
    }
  }
  SUBCASE("space") {
    std::vector<Body> bodies{
        Body::superellipsoid(4, {1.0, 1.0, 1.0}),
        Body::radial_perturbed(3, 0.07, 9),
    };
    for (const auto& K : bodies) {
      for (int trial = 0; trial < 4; ++trial) {
        auto x = random_point(rng, 3, 2.0);
        double oracle = support_fib_3d(K, x);
        double xn = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        CHECK(std::abs(K.support(x) - oracle) <= 3e-4 * xn * K.outer_radius());
        CHECK(K.support(x) >= oracle - 1e-12);
      }
    }
  }
}

TEST_CASE("superellipsoid dual is the conjugate-exponent norm") {
  std::mt19937_64 rng(14);
  struct Case {
    int p;
    std::vector<double> a;
  };
  std::vector<Case> cases{{4, {1.0, 1.5}}, {4, {1.0, 1.0, 1.0}}, {6, {0.8, 1.2}}};
  for (const auto& c : cases) {
    Body K = Body::superellipsoid(c.p, c.a);
    Body Kd = K.dual();
    double q = double(c.p) / (c.p - 1);
    for (int trial = 0; trial < 12; ++trial) {
      auto x = random_point(rng, int(c.a.size()), 2.0);
      double s = 0.0;
      for (std::size_t i = 0; i < c.a.size(); ++i) s += std::pow(std::abs(c.a[i] * x[i]), q);
      double closed = std::pow(s, 1.0 / q);
      CHECK(Kd.gauge(x) == doctest::Approx(closed).epsilon(1e-8));
      CHECK(K.support(x) == doctest::Approx(closed).epsilon(1e-8));
    }
  }
}

TEST_CASE("ellipsoid support closed form agrees with the ascent path") {
  std::mt19937_64 rng(15);
  Body E = Body::ellipsoid({2.0, 1.0, 0.6});
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_point(rng, 3, 2.0);
    double closed = 0.0;
    std::vector<double> a{2.0, 1.0, 0.6};
    for (int i = 0; i < 3; ++i) closed += a[i] * a[i] * x[i] * x[i];
    closed = std::sqrt(closed);
    CHECK(E.support(x) == doctest::Approx(closed).epsilon(1e-12));
    auto r = latlab::detail::support_ascent(E, x);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(closed).epsilon(1e-9));
    CHECK(E.gauge(r.maximizer) == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("volumes match closed forms") {
  CHECK(Body::ball(2).volume() == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(Body::ball(3).volume() == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
  CHECK(Body::ball(5).volume() == doctest::Approx(ball_volume(5)).epsilon(1e-12));
  CHECK(Body::ellipsoid({2.0, 1.0, 0.5}).volume() ==
        doctest::Approx(ball_volume(3)).epsilon(1e-12));

  CHECK(Body::superellipsoid(4, {1.0, 1.0}).volume() ==
        doctest::Approx(superellipsoid_volume(2, 4, {1.0, 1.0})).epsilon(1e-8));
  CHECK(Body::superellipsoid(4, {1.0, 1.5, 0.8}).volume() ==
        doctest::Approx(superellipsoid_volume(3, 4, {1.0, 1.5, 0.8})).epsilon(1e-8));
  CHECK(Body::superellipsoid(6, {1.0, 1.0, 1.0, 1.0}).volume() ==
        doctest::Approx(superellipsoid_volume(4, 6, {1.0, 1.0, 1.0, 1.0})).epsilon(1e-7));

  CHECK(Body::radial_perturbed(2, 0.0, 3).volume() == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(Body::radial_perturbed(3, 0.0, 3).volume() ==
        doctest::Approx(ball_volume(3)).epsilon(1e-10));

  // Perturbed volume stays within the radial bracket.
  Body R = Body::radial_perturbed(3, 0.1, 21);
  CHECK(R.volume() > ball_volume(3) * std::pow(R.inner_radius(), 3) - 1e-9);
  CHECK(R.volume() < ball_volume(3) * std::pow(R.outer_radius(), 3) + 1e-9);
}

TEST_CASE("duality pairing inequality with tight maximizers") {
  std::mt19937_64 rng(16);
  std::vector<Body> bodies{
      Body::ellipsoid({2.0, 1.0}),
      Body::superellipsoid(4, {1.0, 1.5}),
      Body::radial_perturbed(3, 0.06, 11),
  };
  for (const auto& K : bodies) {
    for (int trial = 0; trial < 15; ++trial) {
      auto x = random_point(rng, K.dim(), 2.0);
      auto y = random_point(rng, K.dim(), 2.0);
      double xy = 0.0;
      for (int i = 0; i < K.dim(); ++i) xy += x[i] * y[i];
      CHECK(xy <= K.gauge(x) * K.support(y) * (1.0 + 1e-8) + 1e-12);

      auto r = K.support_detail(y);
      CHECK(K.gauge(r.maximizer) == doctest::Approx(1.0).epsilon(1e-6));
      double my = 0.0;
      for (int i = 0; i < K.dim(); ++i) my += r.maximizer[i] * y[i];
      CHECK(my == doctest::Approx(r.value).epsilon(1e-6));
    }
  }
}

TEST_CASE("double dual returns the base body") {
  std::mt19937_64 rng(17);
  std::vector<Body> bodies{
      Body::ball(3),
      Body::ellipsoid({2.0, 1.0, 0.5}),
      Body::superellipsoid(4, {1.0, 1.5}),
      Body::radial_perturbed(2, 0.05, 42),
  };
  for (const auto& K : bodies) {
    Body KK = K.dual().dual();
    CHECK(KK.to_string() == K.to_string());
    for (int trial = 0; trial < 8; ++trial) {
      auto x = random_point(rng, K.dim(), 2.0);
      CHECK(KK.gauge(x) == doctest::Approx(K.gauge(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("curvature closed forms") {
  std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
  std::vector<double> d3{0.3, -0.4, 0.5}, d4{1.0, 1.0, 1.0, 1.0};
  CHECK(Body::ball(2).curvature(e1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(Body::ball(3).curvature(d3) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(Body::ball(4).curvature(d4) == doctest::Approx(1.0).epsilon(1e-5));

  // Ellipse x^2/4 + y^2 = 1: curvature a/b^2 = 2 at (2, 0), b/a^2 = 1/4 at (0, 1).
  Body E = Body::ellipsoid({2.0, 1.0});
  CHECK(E.curvature(e1) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(E.curvature(e2) == doctest::Approx(0.25).epsilon(1e-5));

  // Gauss curvature of an ellipsoid at an axis is the product of the
  // principal curvatures there.
  Body E3 = Body::ellipsoid({2.0, 1.0, 1.0});
  std::vector<double> a1{1.0, 0.0, 0.0}, a2{0.0, 1.0, 0.0}, gen{0.2, 0.5, -0.8};
  CHECK(E3.curvature(a1) == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(E3.curvature(a2) == doctest::Approx(0.25 * 1.0).epsilon(1e-4));

  CHECK(Body::radial_perturbed(3, 0.0, 8).curvature(gen) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("curvature matches the polar oracle in the plane") {
  std::vector<std::pair<Body, double>> cases;
  cases.emplace_back(Body::ellipsoid({2.0, 1.0}), 0.0);
  cases.emplace_back(Body::ellipsoid({2.0, 1.0}), 0.9);
  cases.emplace_back(Body::superellipsoid(4, {1.0, 1.0}), 0.7);
  cases.emplace_back(Body::superellipsoid(4, {1.0, 1.5}), 2.3);
  cases.emplace_back(Body::radial_perturbed(2, 0.08, 5), 1.1);
  for (auto& [K, alpha] : cases) {
    double oracle = curvature_polar_2d(K, alpha);
    auto n = normal_at_2d(K, alpha);
    CHECK(K.curvature(n) == doctest::Approx(oracle).epsilon(2e-3));
  }
}

TEST_CASE("radii bracket the radial function") {
  std::mt19937_64 rng(18);
  std::vector<Body> bodies{
      Body::ellipsoid({2.0, 1.0, 0.5}),
      Body::superellipsoid(4, {1.0, 1.5}),
      Body::radial_perturbed(3, 0.1, 6),
      Body::superellipsoid(4, {1.0, 1.5}).dual(),
  };
  for (const auto& K : bodies) {
    CHECK(K.inner_radius() > 0.0);
    CHECK(K.inner_radius() <= K.outer_radius());
    bool tight_outer = false;
    for (int trial = 0; trial < 400; ++trial) {
      auto u = random_point(rng, K.dim());
      double n = 0.0;
      for (double v : u) n += v * v;
      n = std::sqrt(n);
      for (double& v : u) v /= n;
      double rho = 1.0 / K.gauge(u);
      CHECK(rho >= K.inner_radius() - 1e-9);
      CHECK(rho <= K.outer_radius() + 1e-9);
      if (rho > 0.8 * K.outer_radius()) tight_outer = true;
    }
    CHECK(tight_outer); // the bound is not wildly loose
  }
}

TEST_CASE("separable profiles reconstruct the gauge") {
  std::mt19937_64 rng(19);
  double p;
  std::vector<double> w;

  Body B = Body::ball(3);
  REQUIRE(B.separable(p, w));
  CHECK(p == 2.0);

  Body E = Body::ellipsoid({2.0, 1.0, 0.5});
  REQUIRE(E.separable(p, w));
  Body S = Body::superellipsoid(4, {1.0, 1.5});
  double ps;
  std::vector<double> ws;
  REQUIRE(S.separable(ps, ws));
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_point(rng, 3, 2.0);
    double lhs = std::pow(E.gauge(x), p);
    double rhs = 0.0;
    for (int i = 0; i < 3; ++i) rhs += w[i] * std::pow(std::abs(x[i]), p);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    auto y = random_point(rng, 2, 2.0);
    double lhs2 = std::pow(S.gauge(y), ps);
    double rhs2 = 0.0;
    for (int i = 0; i < 2; ++i) rhs2 += ws[i] * std::pow(std::abs(y[i]), ps);
    CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-12));
  }

  CHECK_FALSE(Body::radial_perturbed(2, 0.05, 1).separable(p, w));
  CHECK_FALSE(Body::superellipsoid(4, {1.0, 1.5}).dual().separable(p, w));
}

TEST_CASE("parse grammar round trips and rejects malformed specs") {
  CHECK(Body::parse("ball", 3).to_string() == "ball");
  CHECK(Body::parse("ellipsoid:2,1", 2).to_string() == "ellipsoid:2,1");
  CHECK(Body::parse("superellipsoid:4:1,1.5", 2).to_string() == "superellipsoid:4:1,1.5");
  CHECK(Body::parse("radial:0.05:42", 2).to_string() == "radial:0.05:42");
  CHECK(Body::parse("ellipsoid:2,1,1", 3).dim() == 3);

  CHECK_THROWS_AS(Body::parse("cube", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("ball:1", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("ellipsoid:2,1", 3), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("ellipsoid:2,oops", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("ellipsoid:2,-1", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("superellipsoid:3:1,1", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("superellipsoid:4:1", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("radial:0.9:1", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::parse("", 2), std::invalid_argument);
  CHECK_THROWS_AS(Body::ball(1), std::invalid_argument);
  CHECK_THROWS_AS(Body::ball(9), std::invalid_argument);
}

TEST_CASE("volume product with the dual respects the ball maximum") {
  // Santaló: vol(K) vol(K*) is maximized by ellipsoids, where it equals
  // the squared ball volume.
  double vb2 = ball_volume(2) * ball_volume(2);
  Body E = Body::ellipsoid({2.0, 1.0});
  CHECK(E.volume() * E.dual().volume() == doctest::Approx(vb2).epsilon(1e-10));

  Body S = Body::superellipsoid(4, {1.0, 1.5});
  double prod = S.volume() * S.dual().volume();
  CHECK(prod < vb2 * (1.0 + 1e-8));
  CHECK(prod > 0.5 * vb2);

  Body R = Body::radial_perturbed(2, 0.1, 13);
  double prodR = R.volume() * R.dual().volume();
  CHECK(prodR < vb2 * (1.0 + 1e-8));
  CHECK(prodR > 0.9 * vb2);
}

TEST_CASE("radial perturbation validation") {
  CHECK_THROWS_AS(Body::radial_perturbed(2, 0.6, 1), std::invalid_argument);
  CHECK_THROWS_AS(Body::radial_perturbed(2, -0.1, 1), std::invalid_argument);
  CHECK_NOTHROW(Body::radial_perturbed(2, 0.0, 1));
  CHECK_NOTHROW(Body::radial_perturbed(4, 0.05, 123));
}
