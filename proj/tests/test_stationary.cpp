#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "irf/lab.hpp"
#include "irf/stationary.hpp"
#include "oracles.hpp"

using namespace irf;
using oracle::kInvSqrt2;

TEST_SUITE("stationary") {

TEST_CASE("two-point CDF values") {
  const auto cdf = stationary_cdf(ThetaDist::two_point(kInvSqrt2));
  CHECK(cdf(kInvSqrt2) == doctest::Approx(0.82842712474619).epsilon(1e-13));
  CHECK(cdf(0.9) == doctest::Approx(0.94142135623731).epsilon(1e-13));
  CHECK(cdf(0.0) == 0.0);
  CHECK(cdf(1.0) == 1.0);
  CHECK(cdf(-0.5) == 0.0);
  CHECK(cdf(3.0) == 1.0);
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    CHECK(cdf(x) == doctest::Approx(two_point_stationary_cdf(kInvSqrt2, x)).epsilon(1e-14));
  }
}

TEST_CASE("three-point CDF") {
  const ThetaDist d({0.3, 0.5, 1.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto cdf = stationary_cdf(d);
  CHECK(d.mean() == doctest::Approx(0.6));
  CHECK(cdf(0.4) == doctest::Approx(0.6111111111111111).epsilon(1e-13));
  CHECK(cdf.breakpoints() == std::vector<double>{0.0, 0.3, 0.5, 1.0});
}

TEST_CASE("CDF agrees with quadrature of the tail integral") {
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> laws{
      {{kInvSqrt2, 1.0}, {0.5, 0.5}},
      {{0.3, 0.5, 1.0}, {0.2, 0.3, 0.5}},
      {{0.4}, {1.0}},
      {{0.1, 0.25, 0.8, 1.7}, {0.4, 0.1, 0.3, 0.2}},
  };
  for (const auto& [s, w] : laws) {
    const auto cdf = stationary_cdf(ThetaDist(s, w));
    const double b = *std::max_element(s.begin(), s.end());
    for (int i = 0; i <= 40; ++i) {
      const double x = b * i / 40.0 + 0.001;
      // midpoint rule on a step integrand: about h / mean per jump
      CHECK(cdf(x) == doctest::Approx(oracle::stationary_cdf_quadrature(s, w, x)).epsilon(5e-5));
    }
  }
}

TEST_CASE("CDF sanity: monotone, continuous, 0 to 1") {
  const ThetaDist d({0.1, 0.25, 0.8, 1.7}, {0.4, 0.1, 0.3, 0.2});
  const auto cdf = stationary_cdf(d);
  double prev = 0.0;
  for (int i = 0; i <= 17000; ++i) {
    const double x = i * 1e-4;
    const double v = cdf(x);
    CHECK(v >= prev);
    CHECK(v - prev <= 1e-4 / d.mean() + 1e-15);  // slope at most 1/E[theta]
    prev = v;
  }
  CHECK(cdf(0.0) == 0.0);
  CHECK(cdf(1.7) == 1.0);
}

TEST_CASE("PiecewiseLinearCDF validation") {
  CHECK_THROWS_AS(PiecewiseLinearCDF({0.0, 0.0}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(PiecewiseLinearCDF({0.0, 1.0}, {0.0, 0.9}), Error);
  CHECK_THROWS_AS(PiecewiseLinearCDF({0.0, 0.5, 1.0}, {0.0, 0.6, 0.5}), Error);
  CHECK_THROWS_AS(PiecewiseLinearCDF({0.0}, {0.0}), Error);
}

TEST_CASE("quantile") {
  const auto cdf = stationary_cdf(ThetaDist::two_point(kInvSqrt2));
  CHECK(stationary_quantile(cdf, 0.0) == 0.0);
  CHECK(stationary_quantile(cdf, 1.0) == 1.0);
  CHECK(stationary_quantile(cdf, z_limit(kInvSqrt2)) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK_THROWS_AS(stationary_quantile(cdf, -0.01), Error);
  CHECK_THROWS_AS(stationary_quantile(cdf, 1.01), Error);
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double u = i / 1000.0;
    const double x = stationary_quantile(cdf, u);
    CHECK(x >= prev);
    prev = x;
    CHECK(cdf(x) == doctest::Approx(u).epsilon(1e-12));
  }
}

TEST_CASE("quantile skips flat pieces") {
  // Support {0.4}: CDF reaches 1 at 0.4 and stays flat.
  const auto cdf = stationary_cdf(ThetaDist({0.4}, {1.0}));
  CHECK(stationary_quantile(cdf, 1.0) == doctest::Approx(0.4));
  CHECK(stationary_quantile(cdf, 0.5) == doctest::Approx(0.2));
}

TEST_CASE("sample_stationary") {
  SUBCASE("KS distance of 1e6 samples") {
    const auto cdf = stationary_cdf(ThetaDist::two_point(kInvSqrt2));
    Rng rng(77);
    std::vector<double> xs(1000000);
    for (double& x : xs) x = sample_stationary(cdf, rng);
    CHECK(ks_distance(EmpiricalCDF(xs), cdf) < 0.002);
  }
  SUBCASE("one-point law gives a uniform law on [0,0.4]") {
    const auto cdf = stationary_cdf(ThetaDist({0.4}, {1.0}));
    Rng rng(78);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = sample_stationary(cdf, rng);
      CHECK(x >= 0.0);
      CHECK(x <= 0.4);
      sum += x;
    }
    CHECK(sum / n == doctest::Approx(0.2).epsilon(0.01));
  }
}

TEST_CASE("large_count against brute force") {
  const auto c4 = large_count(kInvSqrt2, 4);
  CHECK(c4.recurrence() == 2);
  CHECK(c4.recurrence() == oracle::brute_recurrence_count(kInvSqrt2, 4));
  for (std::uint64_t n : {1u, 2u, 3u, 10u, 99u, 577u, 3363u, 10000u}) {
    CHECK(large_count(kInvSqrt2, n).recurrence() == oracle::brute_recurrence_count(kInvSqrt2, n));
    CHECK(large_count(kInvSqrt2, n).recurrence() ==
          n - static_cast<std::uint64_t>(oracle::floor_mult(kInvSqrt2, static_cast<std::int64_t>(n))));
  }
  const double small_alpha = 1.0 - kInvSqrt2;
  for (std::uint64_t n : {1u, 5u, 41u, 1000u}) {
    const auto c = large_count(small_alpha, n);
    CHECK_FALSE(c.alpha_above_half);
    CHECK(c.recurrence() == oracle::brute_recurrence_count(small_alpha, n));
    CHECK(c.large <= c.large_and_medium);
  }
}

TEST_CASE("large_count frequency tends to 1 - alpha") {
  const auto c = large_count(kInvSqrt2, 1000000);
  CHECK(std::fabs(static_cast<double>(c.large) / 1e6 - (1.0 - kInvSqrt2)) < 0.002);
}

TEST_CASE("large_count on a rational alpha is periodic") {
  // <i/4> cycles through 1/4, 1/2, 3/4, 0; three of every four are >= alpha.
  const auto c4 = large_count(0.25, 4);
  const auto c8 = large_count(0.25, 8);
  CHECK(c8.recurrence() == 2 * c4.recurrence());
  CHECK(c4.recurrence() == 3);
}

TEST_CASE("small multiples") {
  CHECK(is_small_multiple(kInvSqrt2, 3));
  CHECK_FALSE(is_small_multiple(kInvSqrt2, 7));
  CHECK(is_small_multiple(kInvSqrt2, 17));
  CHECK_FALSE(is_small_multiple(kInvSqrt2, 1));
}

TEST_CASE("affine small-vertex coefficients") {
  const auto a3 = affine_small_vertex(kInvSqrt2, 3);
  const auto L3 = large_count(kInvSqrt2, 3).recurrence();
  CHECK(a3.a == 6.0 - L3);
  CHECK(a3.b == -(6.0 - 2.0 * L3));
  CHECK_THROWS_AS(affine_small_vertex(kInvSqrt2, 7), Error);
  try {
    affine_small_vertex(kInvSqrt2, 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("affine identity against the closed-form CDF") {
  const double z = z_limit(kInvSqrt2);
  int checked = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    if (!is_small_multiple(kInvSqrt2, n)) continue;
    const auto a = affine_small_vertex(kInvSqrt2, n);
    const double frac = static_cast<double>(oracle::frac_mult(kInvSqrt2, static_cast<std::int64_t>(n)));
    CHECK(std::fabs(a.at(z) - two_point_stationary_cdf(kInvSqrt2, frac)) < 1e-9);
    ++checked;
  }
  CHECK(checked > 2500);
}

TEST_CASE("affine identity, alpha below one half") {
  for (double alpha : {1.0 - kInvSqrt2, 1.0 - oracle::kGoldenConj, 0.1 * std::numbers::sqrt2}) {
    REQUIRE(alpha < 0.5);
    const double z = z_limit(alpha);
    int checked = 0;
    // n = 1 sits on the small/medium boundary when alpha < 1/2
    for (std::uint64_t n = 2; n <= 3000; ++n) {
      if (!is_small_multiple(alpha, n)) continue;
      const auto a = affine_small_vertex(alpha, n);
      const double frac = static_cast<double>(oracle::frac_mult(alpha, static_cast<std::int64_t>(n)));
      CHECK(std::fabs(a.at(z) - two_point_stationary_cdf(alpha, frac)) < 1e-9);
      ++checked;
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("stationarity propagation reproduces the bootstrap values") {
  const auto table = propagate_stationarity(kInvSqrt2, 200);
  auto at = [&](std::int64_t k) { return table.at(static_cast<std::size_t>(k + 200)); };
  REQUIRE(at(0));
  REQUIRE(at(1));
  CHECK(*at(0) == AffineInZ{0.0, 0.0});
  CHECK(*at(1) == AffineInZ{1.0, 0.0});
  REQUIRE(at(-1));
  CHECK(at(-1)->a == doctest::Approx(-2.0));
  CHECK(at(-1)->b == doctest::Approx(2.0));
  REQUIRE(at(2));
  CHECK(at(2)->a == doctest::Approx(3.0));
  CHECK(at(2)->b == doctest::Approx(-2.0));
}

TEST_CASE("propagation agrees with the small-vertex formula") {
  for (double alpha : {kInvSqrt2, 1.0 - kInvSqrt2}) {
    const std::int64_t w = 2000;
    const auto table = propagate_stationarity(alpha, w);
    int compared = 0;
    for (std::uint64_t n = 2; n <= static_cast<std::uint64_t>(w); ++n) {
      const auto& entry = table[static_cast<std::size_t>(static_cast<std::int64_t>(n) + w)];
      if (!entry || !is_small_multiple(alpha, n)) continue;
      const auto f = affine_small_vertex(alpha, n);
      CHECK(entry->a == doctest::Approx(f.a));
      CHECK(entry->b == doctest::Approx(f.b));
      ++compared;
    }
    CHECK(compared > 100);
    // every resolved entry matches the closed form at z = 2 alpha / (1 + alpha)
    const double z = z_limit(alpha);
    for (std::int64_t k = -w; k <= w; ++k) {
      const auto& entry = table[static_cast<std::size_t>(k + w)];
      if (!entry) continue;
      const double x = static_cast<double>(oracle::frac_mult(alpha, k));
      CHECK(entry->at(z) == doctest::Approx(two_point_stationary_cdf(alpha, x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("z estimates along small convergent denominators") {
  const double target = z_limit(kInvSqrt2);
  CHECK(target == doctest::Approx(0.8284271247461901).epsilon(1e-15));
  double prev_err = 1.0;
  for (std::uint64_t q : {3u, 17u, 99u, 577u, 3363u}) {
    REQUIRE(is_small_multiple(kInvSqrt2, q));
    const double err = std::fabs(z_estimate(kInvSqrt2, q) - target);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-6);
  CHECK_THROWS_AS(z_estimate(kInvSqrt2, 1), Error);
}

}  // TEST_SUITE
