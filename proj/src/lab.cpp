#include "irf/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "irf/diophantine.hpp"
#include "parallel.hpp"

namespace irf {

namespace {

constexpr std::uint64_t kStationarityBlock = 4096;

// Substream tags inside one trial.
constexpr std::uint64_t kForwardStream = 0;
constexpr std::uint64_t kBackwardStream = 1;
constexpr std::uint64_t kStepStream = 2;

}  // namespace

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) fail(ErrorKind::InvalidArgument, "empirical CDF needs at least one sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_distance(const EmpiricalCDF& sample, const PiecewiseLinearCDF& reference) {
  const auto& xs = sample.sorted();
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = reference(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  const auto& xs = a.sorted();
  const auto& ys = b.sorted();
  const auto na = static_cast<double>(xs.size());
  const auto nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() || j < ys.size()) {
    double x;
    if (j == ys.size() || (i < xs.size() && xs[i] <= ys[j]))
      x = xs[i];
    else
      x = ys[j];
    while (i < xs.size() && xs[i] == x) ++i;
    while (j < ys.size() && ys[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

EmpiricalCDF ensemble_forward(const ThetaDist& dist, double x0, std::uint64_t n, const TrialPlan& plan,
                              unsigned threads) {
  validate(plan);
  if (!(x0 >= 0.0)) fail(ErrorKind::InvalidArgument, "starting point must be >= 0");
  std::vector<double> out(plan.trials);
  detail::parallel_for(plan.trials, threads, [&](std::uint64_t t) {
    Rng rng = Rng::for_trial(plan.master_seed, t, kForwardStream);
    double x = x0;
    for (std::uint64_t k = 0; k < n; ++k) x = kernel::step(dist.sample(rng), x);
    out[t] = x;
  });
  return EmpiricalCDF(std::move(out));
}

EmpiricalCDF ensemble_backward(const ThetaDist& dist, double x0, std::uint64_t n, const TrialPlan& plan,
                               unsigned threads) {
  validate(plan);
  if (!(x0 >= 0.0)) fail(ErrorKind::InvalidArgument, "starting point must be >= 0");
  std::vector<double> out(plan.trials);
  detail::parallel_for(plan.trials, threads, [&](std::uint64_t t) {
    Rng rng = Rng::for_trial(plan.master_seed, t, kBackwardStream);
    const ThetaWord word = draw_word(dist, rng, n);
    out[t] = fold_backward(word, x0);
  });
  return EmpiricalCDF(std::move(out));
}

std::vector<double> backward_diam_ensemble(const ThetaDist& dist, std::uint64_t n, const TrialPlan& plan,
                                           unsigned threads) {
  validate(plan);
  if (dist.bound() > 1.0) fail(ErrorKind::InvalidArgument, "backward diameters need support inside (0,1]");
  std::vector<double> out(plan.trials);
  detail::parallel_for(plan.trials, threads, [&](std::uint64_t t) {
    Rng rng = Rng::for_trial(plan.master_seed, t, kBackwardStream);
    const ThetaWord word = draw_word(dist, rng, n);
    Interval cur{0.0, 1.0};
    for (auto it = word.rbegin(); it != word.rend(); ++it) cur = kernel::image(*it, cur);
    out[t] = cur.length();
  });
  return out;
}

StationarityReport stationarity_check(const ThetaDist& dist, const TrialPlan& plan, unsigned threads) {
  validate(plan);
  const PiecewiseLinearCDF pi = stationary_cdf(dist);
  const std::uint64_t blocks = (plan.trials + kStationarityBlock - 1) / kStationarityBlock;
  std::vector<double> before(plan.trials), after(plan.trials);
  detail::parallel_for(blocks, threads, [&](std::uint64_t b) {
    Rng draw = Rng::for_trial(plan.master_seed, b, kForwardStream);
    Rng steps = Rng::for_trial(plan.master_seed, b, kStepStream);
    const std::uint64_t end = std::min(plan.trials, (b + 1) * kStationarityBlock);
    for (std::uint64_t i = b * kStationarityBlock; i < end; ++i) {
      before[i] = sample_stationary(pi, draw);
      after[i] = kernel::step(dist.sample(steps), before[i]);
    }
  });
  StationarityReport report;
  report.samples = plan.trials;
  report.ks_before = ks_distance(EmpiricalCDF(std::move(before)), pi);
  report.ks_after = ks_distance(EmpiricalCDF(std::move(after)), pi);
  return report;
}

BvfReport bvf_check(const ThetaDist& dist, double x0, std::uint64_t n, const TrialPlan& plan, unsigned threads) {
  const EmpiricalCDF forward = ensemble_forward(dist, x0, n, plan, threads);
  const EmpiricalCDF backward = ensemble_backward(dist, x0, n, plan, threads);
  return {n, plan.trials, x0, ks_distance(forward, backward)};
}

std::uint64_t rate_horizon(std::int64_t q) {
  if (q < 2) fail(ErrorKind::InvalidArgument, "rate horizon needs q >= 2");
  const long double qq = static_cast<long double>(q);
  return static_cast<std::uint64_t>(std::ceil(8.0L * qq * qq * qq * std::log2(qq)));
}

RateReport rate_experiment(double alpha, std::int64_t q_k, double epsilon, const TrialPlan& plan,
                           unsigned threads) {
  validate(plan);
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  if (q_k > kMaxRateQ)
    fail(ErrorKind::InvalidArgument, "q_k above " + std::to_string(kMaxRateQ) + " exceeds the desk-scale cap");
  const auto convs = convergents(contfrac_expand(alpha, std::min(reliable_terms(alpha), 30)));
  const bool is_denominator =
      std::any_of(convs.begin(), convs.end(), [&](const Convergent& c) { return c.q == q_k; });
  if (!is_denominator) fail(ErrorKind::InvalidArgument, "q_k is not a convergent denominator of alpha");
  if (!(epsilon > 8.0 / static_cast<double>(q_k))) fail(ErrorKind::Domain, "epsilon must exceed 8/q_k");

  RateReport report;
  report.alpha = alpha;
  report.q_k = q_k;
  report.epsilon = epsilon;
  report.horizon = rate_horizon(q_k);
  report.trials = plan.trials;
  report.master_seed = plan.master_seed;
  report.diameters.resize(plan.trials);

  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t n = report.horizon;
  detail::parallel_for(plan.trials, threads, [&](std::uint64_t t) {
    // Letter i (1-based) is alpha iff bit (i-1) % 64 of draw (i-1) / 64 is set.
    Rng rng = Rng::for_trial(plan.master_seed, t, kBackwardStream);
    std::vector<std::uint64_t> bits((n + 63) / 64);
    for (auto& w : bits) w = rng.bits();
    Interval cur{0.0, 1.0};
    for (std::uint64_t i = n; i-- > 0;) {
      const bool is_alpha = (bits[i / 64] >> (i % 64)) & 1U;
      cur = kernel::image(is_alpha ? alpha : 1.0, cur);
    }
    report.diameters[t] = cur.length();
  });
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report.success_count = static_cast<std::uint64_t>(
      std::count_if(report.diameters.begin(), report.diameters.end(), [&](double d) { return d < epsilon; }));
  if (report.success_count < report.trials) {
    const double failure = 1.0 - report.success_fraction();
    report.implied_c = -epsilon * std::log(failure);
  }
  return report;
}

double walk_confinement_dp(int n) {
  if (n < 1 || n > 30) fail(ErrorKind::InvalidArgument, "walk confinement needs 1 <= n <= 30");
  const auto width = static_cast<std::size_t>(2 * n + 1);
  std::vector<double> mass(width, 0.0), next(width, 0.0);
  mass[static_cast<std::size_t>(n)] = 1.0;
  const std::uint64_t horizon = static_cast<std::uint64_t>(n) * n * n;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    for (std::size_t j = 0; j < width; ++j) {
      const double left = j > 0 ? mass[j - 1] : 0.0;
      const double right = j + 1 < width ? mass[j + 1] : 0.0;
      next[j] = 0.5 * (left + right);
    }
    mass.swap(next);
  }
  double total = 0.0;
  for (double m : mass) total += m;
  return total;
}

RhoAuditReport rho_walk_audit(double alpha, double x0, std::uint64_t steps, const TrialPlan& plan,
                              std::span<const std::int64_t> q_values, std::int64_t window, unsigned threads) {
  validate(plan);
  if (!(x0 > 0.0 && x0 < std::min(alpha, 1.0 - alpha)))
    fail(ErrorKind::InvalidArgument, "x0 must satisfy 0 < x0 < min(alpha, 1 - alpha)");
  for (std::int64_t q : q_values)
    if (q < 1) fail(ErrorKind::InvalidArgument, "q_m must be positive");

  RhoAuditReport report;
  report.alpha = alpha;
  report.x0 = x0;
  report.steps = steps;
  report.trials = plan.trials;
  for (std::int64_t q : q_values) report.farsmall.push_back({q, 0, 0});
  if (steps == 0) return report;

  const OrbitGraphWindow graph = build_graph_window(alpha, x0, window);
  const RhoChart chart = rho_chart(graph, {0, 1});

  struct TrialResult {
    std::uint64_t plus = 0, minus = 0, nonunit = 0;
    std::vector<std::uint64_t> segments, violations;
  };
  std::vector<TrialResult> results(plan.trials);

  detail::parallel_for(plan.trials, threads, [&](std::uint64_t t) {
    Rng rng = Rng::for_trial(plan.master_seed, t, kForwardStream);
    TrialResult& res = results[t];
    std::vector<std::int64_t> rho(steps + 1);
    std::vector<double> value(steps + 1);
    auto vertex = static_cast<std::size_t>(graph.index({0, 1}));
    rho[0] = 0;
    value[0] = graph.value(vertex);
    std::uint64_t word = 0;
    for (std::uint64_t k = 1; k <= steps; ++k) {
      if ((k - 1) % 64 == 0) word = rng.bits();
      const Letter letter = ((word >> ((k - 1) % 64)) & 1U) ? Letter::Alpha : Letter::One;
      const std::int64_t next = graph.target(vertex, letter);
      if (next == OrbitGraphWindow::kNoVertex || !chart.at_index(static_cast<std::size_t>(next)))
        fail(ErrorKind::Domain, "walk left the charted window; enlarge the window");
      vertex = static_cast<std::size_t>(next);
      rho[k] = *chart.at_index(vertex);
      value[k] = graph.value(vertex);
      const std::int64_t delta = rho[k] - rho[k - 1];
      if (delta == 1)
        ++res.plus;
      else if (delta == -1)
        ++res.minus;
      else
        ++res.nonunit;
    }

    for (std::int64_t q : q_values) {
      const double bound = 3.0 / (2.0 * static_cast<double>(q));
      std::uint64_t segments = 0, violations = 0;
      std::uint64_t lo_at = 0, hi_at = 0;
      for (std::uint64_t k = 1; k <= steps; ++k) {
        if (rho[k] < rho[lo_at]) lo_at = k;
        if (rho[k] > rho[hi_at]) hi_at = k;
        if (rho[hi_at] - rho[lo_at] < 2 * q) continue;
        const auto [from, to] = std::minmax(lo_at, hi_at);
        const double smallest = *std::min_element(value.begin() + static_cast<std::ptrdiff_t>(from),
                                                  value.begin() + static_cast<std::ptrdiff_t>(to) + 1);
        ++segments;
        if (!(smallest < bound)) ++violations;
        lo_at = hi_at = k;
      }
      res.segments.push_back(segments);
      res.violations.push_back(violations);
    }
  });

  for (const TrialResult& res : results) {
    report.plus_steps += res.plus;
    report.minus_steps += res.minus;
    report.nonunit_steps += res.nonunit;
    for (std::size_t i = 0; i < report.farsmall.size(); ++i) {
      report.farsmall[i].segments += res.segments[i];
      report.farsmall[i].violations += res.violations[i];
    }
  }
  return report;
}

}  // namespace irf
