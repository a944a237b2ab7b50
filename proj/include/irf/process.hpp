#pragma once

// The Markov step x -> |theta - x|, its forward and backward iterates, and
// exact images of intervals under compositions of steps.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "irf/error.hpp"
#include "irf/rng.hpp"

namespace irf {

// Finite-support law of the fold point theta on (0, b].
class ThetaDist {
 public:
  ThetaDist(std::vector<double> support, std::vector<double> weights);

  // Uniform law on {alpha, 1}, 0 < alpha < 1.
  static ThetaDist two_point(double alpha);

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double bound() const noexcept { return bound_; }
  double mean() const noexcept;

  bool is_canonical_two_point() const noexcept { return canonical_; }
  // Only meaningful for the canonical two-point law.
  double alpha() const noexcept { return canonical_ ? alpha_ : std::nan(""); }

  double sample(Rng& rng) const;

 private:
  std::vector<double> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  double bound_ = 0.0;
  double alpha_ = 0.0;
  bool canonical_ = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const noexcept {
    return lo <= other.lo && other.hi <= hi;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

Interval make_interval(double lo, double hi);

using ThetaWord = std::vector<double>;

struct TrialPlan {
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 1;
  std::uint64_t steps = 0;
};

void validate(const TrialPlan& plan);

enum class FoldDirection { Forward, Backward };

// Unchecked kernels shared by the hot loops.
namespace kernel {
inline double step(double theta, double x) noexcept { return std::fabs(theta - x); }

// theta equal to an endpoint takes the non-folding branch.
inline Interval image(double theta, Interval in) noexcept {
  if (theta <= in.lo) return {in.lo - theta, in.hi - theta};
  if (theta >= in.hi) return {theta - in.hi, theta - in.lo};
  return {0.0, std::fmax(theta - in.lo, in.hi - theta)};
}
}  // namespace kernel

double step(double theta, double x);

double sample_theta(const ThetaDist& dist, Rng& rng);

// trajectory[k] = F_k(word, x0); size word.size() + 1.
std::vector<double> iterate_forward(std::span<const double> word, double x0);

// f_{w_1} o ... o f_{w_n}(x): the last letter acts first.
double fold_backward(std::span<const double> word, double x);

Interval interval_image(double theta, const Interval& in);

// Entry k is the image of `in` under the length-k prefix of `word`, composed
// forward (F_k) or backward (B_k). Entry 0 is `in`. The backward sequence is
// quadratic in the word length.
std::vector<Interval> interval_fold(std::span<const double> word, const Interval& in,
                                    FoldDirection direction);

// Image of `in` under the backward composition of the whole word.
Interval backward_image(std::span<const double> word, const Interval& in);

ThetaWord draw_word(const ThetaDist& dist, Rng& rng, std::size_t length);

}  // namespace irf
