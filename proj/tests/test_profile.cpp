#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "latlab/body.hpp"
#include "latlab/lattice.hpp"
#include "latlab/profile.hpp"

using namespace latlab;

namespace {

ShellHistogram synthetic_hist(double q, double delta, int dim, std::vector<long long> counts) {
  ShellHistogram h;
  h.q = q;
  h.delta = delta;
  h.t_max = q;
  h.dim = dim;
  h.counts = std::move(counts);
  for (long long c : h.counts) h.total += c;
  return h;
}

} // namespace

TEST_CASE("profile fields satisfy the defining identities") {
  for (const auto& K : {Body::ball(2), Body::ellipsoid({2.0, 1.0}), Body::ball(3)}) {
    double q = 6.0;
    auto h = shell_histogram(K, q, 1.0 / (2.0 * q));
    auto p = build_profile(h, K);
    CAPTURE(K.to_string());
    REQUIRE(p.t.size() == h.counts.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < p.t.size(); ++k) {
      CHECK(p.t[k] == doctest::Approx((k + 0.5) * p.delta).epsilon(1e-14));
      CHECK(p.nu0[k] == q * double(h.counts[k]));
      CHECK(p.nu0[k] >= 0.0);
      CHECK(p.N0[k] >= prev);
      prev = p.N0[k];
      double tk = p.t[k];
      CHECK(p.E0[k] + std::pow(tk, p.dim) * p.volume ==
            doctest::Approx(p.N0[k]).epsilon(1e-12));
      double w = std::pow(tk, 0.5 * (1 - p.dim));
      CHECK(p.nu_w[k] == doctest::Approx(w * p.nu0[k]).epsilon(1e-13));
      CHECK(p.E_w[k] == doctest::Approx(w * p.E0[k]).epsilon(1e-13));
      if (p.t[k] > q + p.delta) CHECK(p.nu0[k] == 0.0);
    }
    CHECK(p.N0.back() == double(h.total + 1));
  }
}

TEST_CASE("sharp discrepancy reproduces the circle count") {
  Body K = Body::ball(2);
  auto p8 = build_profile(shell_histogram(K, 8.0, 1.0 / 16.0), K);
  CHECK(discrepancy_at(p8, 5.0) == doctest::Approx(81.0 - 25.0 * M_PI).epsilon(1e-12));
  auto p12 = build_profile(shell_histogram(K, 12.0, 1.0 / 24.0), K);
  CHECK(discrepancy_at(p12, 10.0) == doctest::Approx(317.0 - 100.0 * M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(discrepancy_at(p8, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(discrepancy_at(p8, 9.5), std::invalid_argument);
}

TEST_CASE("l1 mass is the exact point count") {
  Body K = Body::ball(2);
  auto p = build_profile(shell_histogram(K, 5.0, 0.1), K);
  auto m = l1_mass(p);
  CHECK(m.mass == 80.0);
  CHECK(m.ratio == doctest::Approx(80.0 / (25.0 * M_PI)).epsilon(1e-12));

  auto empty = build_profile(synthetic_hist(4.0, 0.125, 2, std::vector<long long>(40, 0)), K);
  CHECK(l1_mass(empty).mass == 0.0);
}

TEST_CASE("mean square statistics match an independent scalar recomputation") {
  Body K = Body::ball(2);
  const double q = 5.0, delta = 0.1;
  auto p = build_profile(shell_histogram(K, q, delta), K);

  // Recompute from scratch: brute-force shell counts, cumulative sums, and a
  // plain loop for the two statistics.
  std::vector<long long> gamma(200, 0);
  for (int x = -5; x <= 5; ++x) {
    for (int y = -5; y <= 5; ++y) {
      if (x == 0 && y == 0) continue;
      double r = std::sqrt(double(x * x + y * y));
      if (r <= q) ++gamma[std::size_t(r / delta)];
    }
  }
  double sg = 0.0, se = 0.0, cum = 1.0;
  for (std::size_t k = 0; (k + 0.5) * delta <= q; ++k) {
    cum += double(gamma[k]);
    double tk = (k + 0.5) * delta;
    double e0 = cum - tk * tk * M_PI;
    sg += double(gamma[k]) * double(gamma[k]);
    se += e0 * e0;
  }
  auto ms = mean_square(p);
  CHECK(ms.D_A == doctest::Approx(std::sqrt(sg) / q).epsilon(1e-12));
  CHECK(ms.D_K == doctest::Approx(std::sqrt(se) / q).epsilon(1e-12));

  auto empty = build_profile(synthetic_hist(4.0, 0.125, 2, std::vector<long long>(40, 0)), K);
  auto ms0 = mean_square(empty);
  CHECK(ms0.D_A == 0.0);
  CHECK(ms0.D_K > 0.0); // E0 = 1 - t^d vol is nonzero even with no points
}

TEST_CASE("weighted nu square sum") {
  SUBCASE("single occupied bucket closed form") {
    Body K = Body::ball(3);
    const double q = 4.0, delta = 0.125;
    std::vector<long long> counts(32, 0);
    counts[17] = 6;
    auto p = build_profile(synthetic_hist(q, delta, 3, counts), K);
    double t0 = 17.5 * delta;
    double expect = delta * std::pow(q * 6.0, 2) * std::pow(t0, 1.0 - 3.0);
    CHECK(l2_weighted_nu(p) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("lower bound at defaults") {
    for (const auto& K : {Body::ball(2), Body::ball(3)}) {
      double q = K.dim() == 2 ? 16.0 : 8.0;
      auto p = build_profile(shell_histogram(K, q, 1.0 / (2.0 * q)), K);
      CHECK(l2_weighted_nu(p) >= 0.1 * K.volume() * std::pow(q, K.dim()));
    }
  }
  SUBCASE("refinement stability after 1/delta rescaling") {
    Body K = Body::ball(3);
    double q = 16.0;
    auto p1 = build_profile(shell_histogram(K, q, 1.0 / (2.0 * q)), K);
    auto p2 = build_profile(shell_histogram(K, q, 1.0 / (4.0 * q)), K);
    double v1 = l2_weighted_nu(p1) / p1.delta;
    double v2 = l2_weighted_nu(p2) / p2.delta;
    CHECK(v2 == doctest::Approx(v1).epsilon(0.01));
  }
}

TEST_CASE("weighted N square sum") {
  Body K2 = Body::ball(2);
  auto p2 = build_profile(shell_histogram(K2, 4.0, 0.125), K2);
  CHECK_THROWS_AS(l2_weighted_N(p2), std::invalid_argument);

  Body K = Body::ball(3);
  double prev = 0.0;
  std::vector<double> ratios;
  for (double q : {8.0, 16.0, 32.0}) {
    auto p = build_profile(shell_histogram(K, q, 1.0 / (2.0 * q)), K);
    auto r = l2_weighted_N(p);
    CHECK(r.value > prev); // monotone in q
    prev = r.value;
    ratios.push_back(r.ratio);
  }
  double lo = *std::min_element(ratios.begin(), ratios.end());
  double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(hi / lo < 2.0);

  auto empty = build_profile(synthetic_hist(4.0, 0.125, 3, std::vector<long long>(40, 0)), K);
  CHECK(l2_weighted_N(empty).value > 0.0); // N0 = 1 everywhere: tiny but positive
}

TEST_CASE("discrete Cauchy-Schwarz holds exactly") {
  for (const auto& K : {Body::ball(2), Body::ellipsoid({2.0, 1.0}), Body::ball(3)}) {
    double q = 7.0;
    auto p = build_profile(shell_histogram(K, q, 1.0 / (2.0 * q)), K);
    auto cs = cauchy_schwarz_support(p);
    CHECK(cs.lhs <= cs.rhs * (1.0 + 1e-14));
    CHECK(cs.support_size > 0);
  }
  // A single occupied bucket gives equality.
  Body K = Body::ball(2);
  std::vector<long long> counts(24, 0);
  counts[5] = 4;
  auto p = build_profile(synthetic_hist(3.0, 1.0 / 6.0, 2, counts), K);
  auto cs = cauchy_schwarz_support(p);
  CHECK(cs.lhs == cs.rhs);
  CHECK(cs.support_size == 1);
}

TEST_CASE("landau envelope ratio is stable across q") {
  Body K = Body::ball(2);
  std::vector<double> ratios;
  for (double q : {8.0, 16.0, 32.0}) {
    auto p = build_profile(shell_histogram(K, q, 1.0 / (2.0 * q)), K);
    double r = landau_ratio(p);
    CHECK(r > 0.0);
    ratios.push_back(r);
  }
  double lo = *std::min_element(ratios.begin(), ratios.end());
  double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(hi / lo < 4.0);
}

TEST_CASE("profile csv dump") {
  Body K = Body::ball(2);
  auto p = build_profile(shell_histogram(K, 3.0, 1.0 / 6.0), K);
  std::ostringstream os;
  write_profile_csv(p, os);
  std::string text = os.str();
  CHECK(text.rfind("t,nu0,N0,E0,nu_w,E_w\n", 0) == 0);
  std::size_t rows = 0;
  for (char c : text) rows += c == '\n' ? 1 : 0;
  CHECK(rows == p.t.size() + 1);
}
