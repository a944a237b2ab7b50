#pragma once

#include <cstdint>
#include <vector>

namespace irf {

inline constexpr int kMaxQuotientTerms = 40;

struct Convergent {
  int index = 0;
  std::int64_t a = 0;  // partial quotient a_n
  std::int64_t p = 0;
  std::int64_t q = 0;
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

// Partial quotients a_0 .. a_terms of alpha in (0,1), fewer if the expansion
// terminates (Gauss-map remainder below 1e-12). The double is expanded
// exactly; a term is refused with a precision error once half an ulp of
// alpha, propagated through the Gauss map, could move it.
std::vector<std::int64_t> contfrac_expand(double alpha, int terms);

// Number of quotients after a_0 that contfrac_expand can deliver for alpha.
int reliable_terms(double alpha);

// p_n / q_n from p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2},
// seeded with (p_{-1}, q_{-1}) = (1, 0) and (p_{-2}, q_{-2}) = (0, 1).
std::vector<Convergent> convergents(const std::vector<std::int64_t>& quotients);

// Scaled approximation error 2 q^2 |alpha - p/q|; below 1 iff the convergent
// meets the 1/(2q^2) quality bound.
double approximation_quality(double alpha, const Convergent& c);

struct CloseWitness {
  std::int64_t k = 0;
  double value = 0.0;
};

// Smallest k in [0, q) with <x - k alpha> < 3/(2q).
CloseWitness find_close_k(double alpha, double x, std::int64_t q);

}  // namespace irf
