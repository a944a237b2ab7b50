#pragma once

// Monte Carlo and exact experiments on the chain. Trials are independent
// and seeded per trial index, so every result is a pure function of its
// inputs and does not depend on the number of worker threads.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "irf/orbit.hpp"
#include "irf/process.hpp"
#include "irf/stationary.hpp"

namespace irf {

class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> samples);

  double operator()(double x) const;  // right-continuous step function
  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

double ks_distance(const EmpiricalCDF& sample, const PiecewiseLinearCDF& reference);
double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b);

// Law of x_n over plan.trials independent forward trajectories from x0.
EmpiricalCDF ensemble_forward(const ThetaDist& dist, double x0, std::uint64_t n, const TrialPlan& plan,
                              unsigned threads = 0);

// Law of B_n(Theta, x0) over independent words.
EmpiricalCDF ensemble_backward(const ThetaDist& dist, double x0, std::uint64_t n, const TrialPlan& plan,
                               unsigned threads = 0);

// Per trial, the exact length of B_n(Theta, [0,1]). The word of trial t is the
// same prefix for every n, so lengths are nonincreasing in n trial by trial.
std::vector<double> backward_diam_ensemble(const ThetaDist& dist, std::uint64_t n, const TrialPlan& plan,
                                           unsigned threads = 0);

struct StationarityReport {
  std::uint64_t samples = 0;
  double ks_before = 0.0;  // sample vs pi
  double ks_after = 0.0;   // one random step later vs pi
};

// Draws plan.trials points from pi (blocks of 4096 share a substream),
// applies one independent step to each and measures the KS distance to pi.
StationarityReport stationarity_check(const ThetaDist& dist, const TrialPlan& plan, unsigned threads = 0);

struct BvfReport {
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  double x0 = 0.0;
  double ks = 0.0;
};

// Two-sample KS distance between F_n(Theta, x0) and B_n(Theta', x0) on
// independent words.
BvfReport bvf_check(const ThetaDist& dist, double x0, std::uint64_t n, const TrialPlan& plan, unsigned threads = 0);

// ceil(8 q^3 log2 q).
std::uint64_t rate_horizon(std::int64_t q);

inline constexpr std::int64_t kMaxRateQ = 99;

struct RateReport {
  double alpha = 0.0;
  std::int64_t q_k = 0;
  double epsilon = 0.0;
  std::uint64_t horizon = 0;  // N
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t success_count = 0;
  std::optional<double> implied_c;  // -epsilon * ln(failure fraction), if any failure
  double runtime_seconds = 0.0;
  std::vector<double> diameters;  // per trial, exact length of B_N([0,1])

  double success_fraction() const noexcept {
    return trials ? static_cast<double>(success_count) / static_cast<double>(trials) : 0.0;
  }
};

// Runs plan.trials uniform words over {alpha, 1} of length N = rate_horizon(q_k)
// and counts the trials with length(B_N([0,1])) < epsilon. q_k must be a
// convergent denominator of alpha, at most kMaxRateQ, with epsilon > 8/q_k.
RateReport rate_experiment(double alpha, std::int64_t q_k, double epsilon, const TrialPlan& plan,
                           unsigned threads = 0);

// Exact probability that a simple random walk of n^3 steps keeps |S_i| <= n,
// by dynamic programming over the 2n+1 positions. 1 <= n <= 30.
double walk_confinement_dp(int n);

struct FarSmallAudit {
  std::int64_t q_m = 0;
  std::uint64_t segments = 0;
  std::uint64_t violations = 0;
};

struct RhoAuditReport {
  double alpha = 0.0;
  double x0 = 0.0;
  std::uint64_t steps = 0;  // per trial
  std::uint64_t trials = 0;
  std::uint64_t plus_steps = 0;
  std::uint64_t minus_steps = 0;
  std::uint64_t nonunit_steps = 0;
  std::vector<FarSmallAudit> farsmall;

  std::optional<double> plus_fraction() const noexcept {
    const auto total = plus_steps + minus_steps + nonunit_steps;
    if (total == 0) return std::nullopt;
    return static_cast<double>(plus_steps) / static_cast<double>(total);
  }
};

// Uniform theta-walks from x0 mapped through the rho chart of the orbit of x0
// (window |n| <= window). Records the +1/-1 balance of rho and, for every
// stretch of a walk whose rho-span reaches 2 q_m, whether the walk passes a
// value below 3/(2 q_m) between the extreme points.
RhoAuditReport rho_walk_audit(double alpha, double x0, std::uint64_t steps, const TrialPlan& plan,
                              std::span<const std::int64_t> q_values, std::int64_t window = kDefaultWindow,
                              unsigned threads = 0);

}  // namespace irf
