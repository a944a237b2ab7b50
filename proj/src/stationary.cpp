#include "irf/stationary.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace irf {

namespace {

constexpr double kClassTolerance = 1e-12;

double fract(double v) { return v - std::floor(v); }

double multiple_value(double alpha, std::int64_t n) {
  return fract(static_cast<double>(n) * alpha);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
}

}  // namespace

PiecewiseLinearCDF::PiecewiseLinearCDF(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size())
    fail(ErrorKind::InvalidArgument, "CDF needs matching breakpoints and values (at least two)");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      fail(ErrorKind::InvalidArgument, "CDF breakpoints must be strictly increasing");
    if (values_[i] < values_[i - 1]) fail(ErrorKind::InvalidArgument, "CDF values must be nondecreasing");
  }
  if (values_.front() != 0.0 || values_.back() != 1.0)
    fail(ErrorKind::InvalidArgument, "CDF must run from 0 to 1");
}

double PiecewiseLinearCDF::operator()(double x) const {
  if (x <= breakpoints_.front()) return 0.0;
  if (x >= breakpoints_.back()) return 1.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto i = static_cast<std::size_t>(it - breakpoints_.begin());
  const double x0 = breakpoints_[i - 1], x1 = breakpoints_[i];
  const double v0 = values_[i - 1], v1 = values_[i];
  return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
}

PiecewiseLinearCDF stationary_cdf(const ThetaDist& dist) {
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < dist.support().size(); ++i)
    points.emplace_back(dist.support()[i], dist.weights()[i]);
  std::sort(points.begin(), points.end());

  const double mean = dist.mean();
  std::vector<double> breaks{0.0};
  std::vector<double> values{0.0};
  double tail = 1.0;  // P(theta > y) on the current piece
  double integral = 0.0;
  double left = 0.0;
  for (const auto& [theta, weight] : points) {
    integral += tail * (theta - left);
    breaks.push_back(theta);
    values.push_back(integral / mean);
    tail -= weight;
    left = theta;
  }
  values.back() = 1.0;
  return PiecewiseLinearCDF(std::move(breaks), std::move(values));
}

double two_point_stationary_cdf(double alpha, double x) {
  check_alpha(alpha);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x <= alpha) return 2.0 * x / (1.0 + alpha);
  return (x + alpha) / (1.0 + alpha);
}

double stationary_quantile(const PiecewiseLinearCDF& cdf, double u) {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorKind::InvalidArgument, "quantile level must lie in [0,1]");
  const auto& xs = cdf.breakpoints();
  const auto& vs = cdf.values();
  if (u <= 0.0) return xs.front();
  const auto it = std::lower_bound(vs.begin(), vs.end(), u);
  const auto i = static_cast<std::size_t>(it - vs.begin());
  // vs[i - 1] < u <= vs[i], so the piece has positive rise.
  const double t = (u - vs[i - 1]) / (vs[i] - vs[i - 1]);
  return std::min(xs[i], xs[i - 1] + t * (xs[i] - xs[i - 1]));
}

double sample_stationary(const PiecewiseLinearCDF& cdf, Rng& rng) {
  return stationary_quantile(cdf, rng.uniform());
}

LargeCounts large_count(double alpha, std::uint64_t n) {
  check_alpha(alpha);
  LargeCounts counts;
  counts.alpha_above_half = alpha > 0.5;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double v = multiple_value(alpha, static_cast<std::int64_t>(i));
    const bool at_least_alpha = v >= alpha;
    const bool above_complement = v > 1.0 - alpha;
    if (counts.alpha_above_half) {
      counts.large += at_least_alpha;
      counts.large_and_medium += above_complement || at_least_alpha;
    } else {
      counts.large += above_complement;
      counts.large_and_medium += at_least_alpha;
    }
  }
  return counts;
}

bool is_small_multiple(double alpha, std::uint64_t n) {
  check_alpha(alpha);
  const double v = multiple_value(alpha, static_cast<std::int64_t>(n));
  const double edge = alpha > 0.5 ? 1.0 - alpha : alpha;
  if (std::fabs(v - edge) <= kClassTolerance)
    fail(ErrorKind::Domain, "orbit point sits on the small-vertex boundary");
  return v < edge;
}

AffineInZ affine_small_vertex(double alpha, std::uint64_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  if (!is_small_multiple(alpha, n)) fail(ErrorKind::Domain, "<n alpha> is not a small vertex");
  const auto l = static_cast<double>(large_count(alpha, n).recurrence());
  const auto nn = static_cast<double>(n);
  return {2.0 * nn - l, -(2.0 * nn - 2.0 * l)};
}

double z_estimate(double alpha, std::uint64_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  if (!is_small_multiple(alpha, n)) fail(ErrorKind::Domain, "<n alpha> is not a small vertex");
  const auto l = static_cast<double>(large_count(alpha, n).recurrence());
  const auto nn = static_cast<double>(n);
  return (2.0 * nn - 2.0 * l) / (2.0 * nn - l);
}

std::vector<std::optional<AffineInZ>> propagate_stationarity(double alpha, std::int64_t window) {
  check_alpha(alpha);
  if (window < 2) fail(ErrorKind::InvalidArgument, "window must be at least 2");
  const auto size = static_cast<std::size_t>(2 * window + 1);
  std::vector<std::optional<AffineInZ>> known(size);
  auto slot = [&](std::int64_t k) -> std::optional<AffineInZ>& {
    return known[static_cast<std::size_t>(k + window)];
  };
  auto in_window = [&](std::int64_t k) { return k >= -window && k <= window; };

  slot(0) = AffineInZ{0.0, 0.0};
  slot(1) = AffineInZ{1.0, 0.0};

  // Relation at x = <k alpha>, written as
  //   2 P(k) + P(-k) - [x+alpha<1] P(k+1) + [x<alpha] P(1-k) = 1 + [x+alpha>=1].
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::int64_t k = -window; k <= window; ++k) {
      if (k == 0) continue;
      const double x = multiple_value(alpha, k);
      struct Term {
        std::int64_t label;
        double coeff;
      };
      std::array<Term, 4> terms{};
      std::size_t count = 0;
      terms[count++] = {k, 2.0};
      terms[count++] = {-k, 1.0};
      double rhs = 1.0;
      if (x + alpha < 1.0)
        terms[count++] = {k + 1, -1.0};
      else
        rhs += 1.0;
      if (x < alpha) terms[count++] = {1 - k, 1.0};

      bool usable = true;
      std::size_t unknown = count;
      std::size_t unknown_count = 0;
      for (std::size_t i = 0; i < count; ++i) {
        if (!in_window(terms[i].label)) {
          usable = false;
          break;
        }
        if (!slot(terms[i].label)) {
          unknown = i;
          ++unknown_count;
        }
      }
      if (!usable || unknown_count != 1) continue;

      AffineInZ acc{0.0, rhs};
      for (std::size_t i = 0; i < count; ++i) {
        if (i == unknown) continue;
        const AffineInZ& v = *slot(terms[i].label);
        acc.a -= terms[i].coeff * v.a;
        acc.b -= terms[i].coeff * v.b;
      }
      const double c = terms[unknown].coeff;
      slot(terms[unknown].label) = AffineInZ{acc.a / c, acc.b / c};
      progress = true;
    }
  }
  return known;
}

}  // namespace irf
