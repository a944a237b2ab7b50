#include "irf/process.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace irf {

namespace {

constexpr double kWeightSumTolerance = 1e-12;

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ThetaDist::ThetaDist(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) fail(ErrorKind::InvalidArgument, "theta distribution has empty support");
  if (support_.size() != weights_.size())
    fail(ErrorKind::InvalidArgument, "support and weights differ in length");

  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (!std::isfinite(support_[i]) || support_[i] <= 0.0)
      fail(ErrorKind::InvalidArgument, "support point must be finite and > 0, got " + describe(support_[i]));
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0)
      fail(ErrorKind::InvalidArgument, "weight must be finite and > 0, got " + describe(weights_[i]));
  }
  std::vector<double> sorted = support_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorKind::InvalidArgument, "support points must be distinct");

  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::fabs(total - 1.0) > kWeightSumTolerance)
    fail(ErrorKind::InvalidArgument, "weights must sum to 1, got " + describe(total));

  bound_ = sorted.back();
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  cumulative_.back() = 1.0;

  if (support_.size() == 2 && weights_[0] == 0.5 && weights_[1] == 0.5 && bound_ == 1.0) {
    const double other = sorted.front();
    if (other > 0.0 && other < 1.0) {
      canonical_ = true;
      alpha_ = other;
    }
  }
}

ThetaDist ThetaDist::two_point(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorKind::InvalidArgument, "two-point alpha must lie in (0,1), got " + describe(alpha));
  return ThetaDist({alpha, 1.0}, {0.5, 0.5});
}

double ThetaDist::mean() const noexcept {
  return std::inner_product(support_.begin(), support_.end(), weights_.begin(), 0.0);
}

double ThetaDist::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cumulative_.begin(), static_cast<std::ptrdiff_t>(support_.size()) - 1));
  return support_[idx];
}

Interval make_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    fail(ErrorKind::InvalidArgument, "invalid interval [" + describe(lo) + ", " + describe(hi) + "]");
  return {lo, hi};
}

void validate(const TrialPlan& plan) {
  if (plan.trials < 1) fail(ErrorKind::InvalidArgument, "trial plan needs at least one trial");
}

double step(double theta, double x) {
  if (!(theta >= 0.0) || !(x >= 0.0))
    fail(ErrorKind::InvalidArgument, "step needs theta >= 0 and x >= 0");
  return kernel::step(theta, x);
}

double sample_theta(const ThetaDist& dist, Rng& rng) { return dist.sample(rng); }

std::vector<double> iterate_forward(std::span<const double> word, double x0) {
  if (!(x0 >= 0.0)) fail(ErrorKind::InvalidArgument, "starting point must be >= 0");
  std::vector<double> trajectory;
  trajectory.reserve(word.size() + 1);
  trajectory.push_back(x0);
  double x = x0;
  for (double theta : word) {
    x = step(theta, x);
    trajectory.push_back(x);
  }
  return trajectory;
}

double fold_backward(std::span<const double> word, double x) {
  if (!(x >= 0.0)) fail(ErrorKind::InvalidArgument, "starting point must be >= 0");
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = step(*it, x);
  return x;
}

Interval interval_image(double theta, const Interval& in) {
  if (!(theta >= 0.0)) fail(ErrorKind::InvalidArgument, "theta must be >= 0");
  if (!(in.lo <= in.hi)) fail(ErrorKind::InvalidArgument, "interval has lo > hi");
  return kernel::image(theta, in);
}

Interval backward_image(std::span<const double> word, const Interval& in) {
  Interval cur = make_interval(in.lo, in.hi);
  for (auto it = word.rbegin(); it != word.rend(); ++it) cur = interval_image(*it, cur);
  return cur;
}

std::vector<Interval> interval_fold(std::span<const double> word, const Interval& in,
                                    FoldDirection direction) {
  std::vector<Interval> out;
  out.reserve(word.size() + 1);
  out.push_back(make_interval(in.lo, in.hi));
  if (direction == FoldDirection::Forward) {
    for (double theta : word) out.push_back(interval_image(theta, out.back()));
  } else {
    for (std::size_t k = 1; k <= word.size(); ++k) out.push_back(backward_image(word.first(k), in));
  }
  return out;
}

ThetaWord draw_word(const ThetaDist& dist, Rng& rng, std::size_t length) {
  ThetaWord word(length);
  for (auto& theta : word) theta = dist.sample(rng);
  return word;
}

}  // namespace irf
