#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "irf/lab.hpp"
#include "oracles.hpp"

using namespace irf;
using oracle::kInvSqrt2;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_SUITE("lab") {

TEST_CASE("empirical CDF") {
  CHECK_THROWS_AS(EmpiricalCDF({}), Error);
  const EmpiricalCDF e({0.3, 0.1, 0.2, 0.2});
  CHECK(e.sorted() == std::vector<double>{0.1, 0.2, 0.2, 0.3});
  CHECK(e(0.05) == 0.0);
  CHECK(e(0.1) == 0.25);
  CHECK(e(0.15) == 0.25);
  CHECK(e(0.2) == 0.75);
  CHECK(e(0.3) == 1.0);
}

TEST_CASE("one-sample KS") {
  const auto pi = stationary_cdf(ThetaDist::two_point(kInvSqrt2));
  SUBCASE("grid inversion is within 1/size") {
    for (std::size_t size : {10u, 137u, 5000u}) {
      std::vector<double> xs;
      for (std::size_t i = 0; i < size; ++i) xs.push_back(stationary_quantile(pi, (i + 0.5) / size));
      CHECK(ks_distance(EmpiricalCDF(xs), pi) <= 1.0 / size + 1e-12);
    }
  }
  SUBCASE("matches a direct sup over jump points") {
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> xs(50 + rep);
      for (double& x : xs) x = rng.uniform();
      const EmpiricalCDF e(xs);
      const double want = oracle::sup_distance_at(xs, [&](double t) { return e(t); }, [&](double t) { return pi(t); });
      CHECK(ks_distance(e, pi) == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("two-sample KS") {
  const EmpiricalCDF a({0.1, 0.5, 0.9});
  CHECK(ks_distance(a, a) == 0.0);
  Rng rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> xs(30 + rep), ys(45);
    for (double& x : xs) x = std::floor(rng.uniform() * 20) / 20;  // ties on purpose
    for (double& y : ys) y = std::floor(rng.uniform() * 25) / 25;
    const EmpiricalCDF ex(xs), ey(ys);
    std::vector<double> pts = xs;
    pts.insert(pts.end(), ys.begin(), ys.end());
    const double want = oracle::sup_distance_at(pts, [&](double t) { return ex(t); }, [&](double t) { return ey(t); });
    CHECK(ks_distance(ex, ey) == doctest::Approx(want).epsilon(1e-12));
    CHECK(ks_distance(ey, ex) == ks_distance(ex, ey));
  }
}

TEST_CASE("KS of many stationary samples") {
  const auto pi = stationary_cdf(ThetaDist::two_point(kInvSqrt2));
  std::vector<double> xs(1000000);
  Rng rng(321);
  for (double& x : xs) x = sample_stationary(pi, rng);
  CHECK(ks_distance(EmpiricalCDF(xs), pi) < 0.002);
}

TEST_CASE("forward ensembles") {
  const ThetaDist d = ThetaDist::two_point(kInvSqrt2);
  const auto pi = stationary_cdf(d);
  SUBCASE("n = 0 is a point mass") {
    const auto e = ensemble_forward(d, 0.3, 0, {1, 1000, 0});
    CHECK(ks_distance(e, EmpiricalCDF({0.3})) == 0.0);
  }
  // Convergence in law is slow: KS to pi is about 0.07 at n = 50, 0.045 at
  // n = 200 and 0.023 at n = 1000 (cross-checked with an independent simulation).
  SUBCASE("KS to the stationary law decreases with n") {
    const double k50 = ks_distance(ensemble_forward(d, 0.2, 50, {5, 100000, 50}), pi);
    const double k200 = ks_distance(ensemble_forward(d, 0.2, 200, {5, 100000, 200}), pi);
    const double k1000 = ks_distance(ensemble_forward(d, 0.2, 1000, {5, 100000, 1000}), pi);
    CHECK(k200 < k50);
    CHECK(k1000 < k200);
    CHECK(k200 < 0.06);
    CHECK(k1000 < 0.03);
  }
  SUBCASE("the limit forgets the start") {
    auto gap = [&](std::uint64_t n) {
      return ks_distance(ensemble_forward(d, 0.9, n, {6, 100000, n}), ensemble_forward(d, 0.1, n, {7, 100000, n}));
    };
    const double g200 = gap(200);
    const double g1000 = gap(1000);
    CHECK(g1000 < g200);
    CHECK(g1000 < 0.05);
  }
  SUBCASE("thread count does not change results") {
    const auto a = ensemble_forward(d, 0.2, 50, {8, 3001, 50}, 1);
    const auto b = ensemble_forward(d, 0.2, 50, {8, 3001, 50}, 7);
    CHECK(a.sorted() == b.sorted());
  }
}

TEST_CASE("backward ensembles and diameters") {
  const ThetaDist d = ThetaDist::two_point(kInvSqrt2);
  SUBCASE("n = 0") {
    for (double v : backward_diam_ensemble(d, 0, {1, 50, 0})) CHECK(v == 1.0);
  }
  SUBCASE("diameters match the exact interval fold") {
    const TrialPlan plan{12, 5, 300};
    const auto diams = backward_diam_ensemble(d, 300, plan);
    for (std::uint64_t t = 0; t < plan.trials; ++t) {
      Rng rng = Rng::for_trial(plan.master_seed, t, 1);
      const ThetaWord w = draw_word(d, rng, 300);
      CHECK(diams[t] == interval_fold(w, {0.0, 1.0}, FoldDirection::Backward).back().length());
    }
  }
  SUBCASE("diameters shrink") {
    // Reference Monte Carlo: median near 0.05 at n = 1000.
    const auto diams = backward_diam_ensemble(d, 1000, {13, 1000, 1000});
    CHECK(median(diams) < 0.1);
  }
  SUBCASE("diameters are nonincreasing trial by trial") {
    const auto d500 = backward_diam_ensemble(d, 500, {14, 1000, 500});
    const auto d1000 = backward_diam_ensemble(d, 1000, {14, 1000, 1000});
    for (std::size_t t = 0; t < d500.size(); ++t) CHECK(d500[t] >= d1000[t]);
  }
  SUBCASE("support beyond 1 is rejected") {
    CHECK_THROWS_AS(backward_diam_ensemble(ThetaDist({0.5, 1.5}, {0.5, 0.5}), 10, {1, 10, 10}), Error);
  }
}

TEST_CASE("one random step preserves the stationary law") {
  for (const ThetaDist& d : {ThetaDist::two_point(kInvSqrt2), ThetaDist({0.3, 0.5, 1.0}, {0.2, 0.3, 0.5})}) {
    const auto r = stationarity_check(d, {77, 200000, 1});
    CHECK(r.samples == 200000);
    CHECK(r.ks_before < 0.005);
    CHECK(r.ks_after < 0.005);
  }
}

TEST_CASE("a non-stationary start is detected") {
  // Sanity check of the harness: a uniform law is not stationary for {alpha, 1}.
  const ThetaDist d = ThetaDist::two_point(kInvSqrt2);
  const auto pi = stationary_cdf(d);
  std::vector<double> xs(100000);
  Rng rng(1);
  for (double& x : xs) x = step(sample_theta(d, rng), rng.uniform());
  CHECK(ks_distance(EmpiricalCDF(xs), pi) > 0.02);
}

TEST_CASE("backward and forward iterates agree in law") {
  const auto r = bvf_check(ThetaDist::two_point(kInvSqrt2), 0.2, 50, {31, 20000, 50});
  CHECK(r.ks < 0.02);
  const auto g = bvf_check(ThetaDist({0.3, 0.5, 1.0}, {0.2, 0.3, 0.5}), 0.7, 30, {32, 20000, 30});
  CHECK(g.ks < 0.02);
}

TEST_CASE("rate horizon") {
  CHECK(rate_horizon(17) == 160654);
  CHECK(rate_horizon(41) == 2953983);
  CHECK(rate_horizon(99) == 51459665);
  CHECK(rate_horizon(2) == 64);
  CHECK_THROWS_AS(rate_horizon(1), Error);
}

TEST_CASE("rate experiment preconditions") {
  const TrialPlan plan{1, 2, 0};
  try {
    rate_experiment(kInvSqrt2, 17, 8.0 / 17.0, plan);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK_THROWS_AS(rate_experiment(kInvSqrt2, 18, 0.9, plan), Error);
  CHECK_THROWS_AS(rate_experiment(kInvSqrt2, 239, 0.5, plan), Error);
}

TEST_CASE("rate experiment") {
  const TrialPlan plan{2024, 24, 0};
  const auto loose = rate_experiment(kInvSqrt2, 17, 1.1, plan);
  CHECK(loose.horizon == 160654);
  CHECK(loose.success_count == loose.trials);
  CHECK_FALSE(loose.implied_c.has_value());

  const auto mid = rate_experiment(kInvSqrt2, 17, 0.5, plan);
  const auto tight = rate_experiment(kInvSqrt2, 17, 0.48, plan);
  CHECK(mid.diameters == loose.diameters);
  CHECK(tight.diameters == loose.diameters);
  CHECK(tight.success_count <= mid.success_count);
  for (std::size_t t = 0; t < mid.diameters.size(); ++t) {
    if (tight.diameters[t] < tight.epsilon) CHECK(mid.diameters[t] < mid.epsilon);
    CHECK(loose.diameters[t] <= 1.0);
  }
  CHECK(mid.success_fraction() >= 0.99);
}

TEST_CASE("rate experiment letters follow the documented bit order") {
  const TrialPlan plan{77, 3, 0};
  const auto r = rate_experiment(kInvSqrt2, 17, 0.9, plan);
  for (std::uint64_t t = 0; t < plan.trials; ++t) {
    Rng rng = Rng::for_trial(plan.master_seed, t, 1);
    ThetaWord w(r.horizon);
    std::uint64_t bits = 0;
    for (std::uint64_t i = 0; i < r.horizon; ++i) {
      if (i % 64 == 0) bits = rng.bits();
      w[i] = (bits >> (i % 64)) & 1 ? kInvSqrt2 : 1.0;
    }
    CHECK(backward_image(w, {0.0, 1.0}).length() == r.diameters[t]);
  }
}

TEST_CASE("walk confinement") {
  CHECK(walk_confinement_dp(1) == 1.0);
  CHECK(walk_confinement_dp(2) == oracle::walk_brute(2));
  for (int n = 1; n <= 4; ++n) {
    const double exact = static_cast<double>(oracle::walk_path_count(n)) / std::ldexp(1.0, n * n * n);
    CHECK(std::fabs(walk_confinement_dp(n) - exact) <= 1e-14);
  }
  for (int n = 1; n <= 14; ++n) {
    const double spectral = oracle::walk_spectral(n);
    CHECK(walk_confinement_dp(n) == doctest::Approx(spectral).epsilon(1e-10));
  }
  double prev = walk_confinement_dp(4);
  double prev_rate = std::log(prev) / 4.0;
  for (int n = 5; n <= 12; ++n) {
    const double p = walk_confinement_dp(n);
    CHECK(p < prev);
    const double rate = std::log(p) / n;
    CHECK(rate < prev_rate);
    prev = p;
    prev_rate = rate;
  }
  CHECK(walk_confinement_dp(12) < walk_confinement_dp(4) * std::exp(-1.0));
  CHECK_THROWS_AS(walk_confinement_dp(0), Error);
  CHECK_THROWS_AS(walk_confinement_dp(31), Error);
}

TEST_CASE("rho walk audit") {
  const std::vector<std::int64_t> qs{7, 17};
  SUBCASE("no steps") {
    const auto r = rho_walk_audit(kInvSqrt2, 0.2, 0, {1, 5, 0}, qs);
    CHECK_FALSE(r.plus_fraction().has_value());
    CHECK(r.farsmall.size() == 2);
    CHECK(r.farsmall[0].segments == 0);
  }
  SUBCASE("balanced unit steps and no far-small violations") {
    const auto r = rho_walk_audit(kInvSqrt2, 0.2, 4000, {99, 500, 4000}, qs);
    CHECK(r.nonunit_steps == 0);
    REQUIRE(r.plus_fraction().has_value());
    CHECK(*r.plus_fraction() >= 0.49);
    CHECK(*r.plus_fraction() <= 0.51);
    for (const auto& a : r.farsmall) {
      CHECK(a.segments >= 1000);
      CHECK(a.violations == 0);
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(rho_walk_audit(kInvSqrt2, 0.5, 10, {1, 1, 10}, qs), Error);
    CHECK_THROWS_AS(rho_walk_audit(kInvSqrt2, 0.2, 100000, {1, 1, 100000}, qs, 50), Error);
  }
  SUBCASE("thread count does not change results") {
    const auto a = rho_walk_audit(kInvSqrt2, 0.2, 500, {5, 40, 500}, qs, kDefaultWindow, 1);
    const auto b = rho_walk_audit(kInvSqrt2, 0.2, 500, {5, 40, 500}, qs, kDefaultWindow, 5);
    CHECK(a.plus_steps == b.plus_steps);
    CHECK(a.farsmall[1].segments == b.farsmall[1].segments);
  }
}

}  // TEST_SUITE
