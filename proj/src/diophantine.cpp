#include "irf/diophantine.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "irf/error.hpp"

namespace irf {

namespace {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

constexpr double kTerminationRemainder = 1e-12;
constexpr std::int64_t kMaxCloseQ = 1'000'000;

struct Expansion {
  std::vector<std::int64_t> quotients;  // a_0, a_1, ...
  bool terminated = false;
  int reliable = 0;  // count of reliable quotients after a_0
};

Expansion expand(double alpha, int max_terms) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  int exponent = 0;
  const double mantissa = std::frexp(alpha, &exponent);  // alpha = mantissa * 2^exponent
  const int shift = 53 - exponent;
  if (shift > 126) fail(ErrorKind::Precision, "alpha too small for exact expansion");
  u128 prev = u128{1} << shift;                                            // denominator
  u128 cur = static_cast<u128>(std::ldexp(mantissa, 53));                  // numerator
  const double half_ulp = (std::nextafter(alpha, 2.0) - alpha) / 2.0;

  Expansion out;
  out.quotients.push_back(0);
  double sensitivity = 1.0;  // |d x_k / d alpha|, x_0 = alpha
  double x_prev_frac = alpha;
  for (int k = 1; k <= max_terms; ++k) {
    sensitivity /= x_prev_frac * x_prev_frac;
    const u128 a = prev / cur;
    const u128 rem = prev % cur;
    if (a > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
      fail(ErrorKind::Overflow, "partial quotient exceeds 64 bits");
    const double frac = static_cast<double>(rem) / static_cast<double>(cur);
    if (rem == 0 || frac < kTerminationRemainder) {
      out.quotients.push_back(static_cast<std::int64_t>(a));
      out.terminated = true;
      ++out.reliable;
      break;
    }
    if (1.0 - frac < kTerminationRemainder) {
      out.quotients.push_back(static_cast<std::int64_t>(a) + 1);
      out.terminated = true;
      ++out.reliable;
      break;
    }
    if (sensitivity * half_ulp >= std::min(frac, 1.0 - frac)) break;
    out.quotients.push_back(static_cast<std::int64_t>(a));
    ++out.reliable;
    prev = cur;
    cur = rem;
    x_prev_frac = frac;
  }
  return out;
}

double fract(double v) {
  const double f = v - std::floor(v);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace

std::vector<std::int64_t> contfrac_expand(double alpha, int terms) {
  if (terms < 0) fail(ErrorKind::InvalidArgument, "term count must be non-negative");
  if (terms > kMaxQuotientTerms)
    fail(ErrorKind::Precision, "more than " + std::to_string(kMaxQuotientTerms) +
                                   " terms exceed double-precision reliability");
  Expansion e = expand(alpha, terms);
  if (!e.terminated && e.reliable < terms)
    fail(ErrorKind::Precision, "only " + std::to_string(e.reliable) +
                                   " partial quotients are reliable in double precision");
  return e.quotients;
}

int reliable_terms(double alpha) { return expand(alpha, kMaxQuotientTerms).reliable; }

std::vector<Convergent> convergents(const std::vector<std::int64_t>& quotients) {
  std::vector<Convergent> out;
  out.reserve(quotients.size());
  i128 p2 = 0, q2 = 1;  // n - 2
  i128 p1 = 1, q1 = 0;  // n - 1
  constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
  for (std::size_t n = 0; n < quotients.size(); ++n) {
    const i128 a = quotients[n];
    if (n > 0 && a < 1) fail(ErrorKind::InvalidArgument, "partial quotients after a_0 must be >= 1");
    const i128 p = a * p1 + p2;
    const i128 q = a * q1 + q2;
    if (p > kMax || q > kMax || p < -kMax) fail(ErrorKind::Overflow, "convergent exceeds 64-bit range");
    out.push_back({static_cast<int>(n), quotients[n], static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return out;
}

double approximation_quality(double alpha, const Convergent& c) {
  const long double q = static_cast<long double>(c.q);
  const long double err = std::fabs(q * static_cast<long double>(alpha) - static_cast<long double>(c.p));
  return static_cast<double>(2.0L * q * err);
}

CloseWitness find_close_k(double alpha, double x, std::int64_t q) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::InvalidArgument, "x must lie in [0,1]");
  if (q < 1) fail(ErrorKind::InvalidArgument, "q must be positive");
  if (q > kMaxCloseQ) fail(ErrorKind::Precision, "q exceeds the precision guard");
  const double bound = 3.0 / (2.0 * static_cast<double>(q));
  for (std::int64_t k = 0; k < q; ++k) {
    const double v = fract(x - static_cast<double>(k) * alpha);
    if (v < bound) return {k, v};
  }
  fail(ErrorKind::LemmaViolation, "no k < " + std::to_string(q) + " brings <x - k alpha> below 3/(2q)");
}

}  // namespace irf
