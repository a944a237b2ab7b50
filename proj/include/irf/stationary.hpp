#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "irf/process.hpp"

namespace irf {

// Continuous CDF, linear between breakpoints, 0 left of the first breakpoint
// and 1 from the last one on.
class PiecewiseLinearCDF {
 public:
  PiecewiseLinearCDF(std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double x) const;
  double lower() const noexcept { return breakpoints_.front(); }
  double upper() const noexcept { return breakpoints_.back(); }

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// F(x) = (1/E[theta]) * integral_0^x P(theta > y) dy, exact for finite support.
PiecewiseLinearCDF stationary_cdf(const ThetaDist& dist);

// Closed form for the uniform law on {alpha, 1}.
double two_point_stationary_cdf(double alpha, double x);

// Smallest x with F(x) >= u.
double stationary_quantile(const PiecewiseLinearCDF& cdf, double u);

double sample_stationary(const PiecewiseLinearCDF& cdf, Rng& rng);

// The value A*z + B as a function of the unknown z = pi(alpha).
struct AffineInZ {
  double a = 0.0;
  double b = 0.0;
  double at(double z) const noexcept { return a * z + b; }
  friend bool operator==(const AffineInZ&, const AffineInZ&) = default;
};

// Vertex counts over <alpha>, ..., <n alpha>. The point <alpha> = alpha sits on
// the large/medium boundary and is counted with the upper class; for every
// other index the classes are strict.
struct LargeCounts {
  std::uint64_t large = 0;
  std::uint64_t large_and_medium = 0;
  bool alpha_above_half = true;

  // L_n when alpha > 1/2, LM_n when alpha < 1/2. Both equal #{i : <i alpha> >= alpha}.
  std::uint64_t recurrence() const noexcept { return alpha_above_half ? large : large_and_medium; }
};

LargeCounts large_count(double alpha, std::uint64_t n);

bool is_small_multiple(double alpha, std::uint64_t n);

// pi(<n alpha>) = (2n - L_n) z - (2n - 2 L_n) for small <n alpha>.
AffineInZ affine_small_vertex(double alpha, std::uint64_t n);

// (2n - 2 L_n) / (2n - L_n); tends to 2 alpha / (1 + alpha) as <n alpha> -> 0.
double z_estimate(double alpha, std::uint64_t n);

inline double z_limit(double alpha) { return 2.0 * alpha / (1.0 + alpha); }

// pi(<k alpha>) for |k| <= window, obtained by propagating the stationarity
// relation pi(x) = 1/2 (1 - pi(1-x)) + 1/2 (pi(alpha+x) - pi(alpha-x)) from
// pi(0) = 0 and pi(alpha) = z. Entry k + window; empty where unresolved.
std::vector<std::optional<AffineInZ>> propagate_stationarity(double alpha, std::int64_t window);

}  // namespace irf
