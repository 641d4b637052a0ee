#pragma once

// z -> z^d + c over Q: escape-rate oracle independent of the divisor
// machinery, Mandelbrot membership and exact PCF detection.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "relesc/divisors.hpp"

namespace relesc {

struct UnicriticalMap {
  int d = 2;
  mpq_class c;

  UnicriticalMap(int d_, mpq_class c_);
  MinCritMap embedding() const { return MinCritMap::unicritical(d, c); }
  /// max(|c|, 2^{1/(d-1)}) + 1; beyond it the orbit escapes monotonically.
  Real escape_radius() const;
};

/// log+|f^k(0)|_v / d^k with the N=1 tail as certified error.
Estimate escape_rate_oracle(const UnicriticalMap& m, int k, Place v);

enum class Membership { Inside, Escaped, Undecided };
std::string to_string(Membership m);

struct MembershipReport {
  Membership verdict = Membership::Undecided;
  int step = 0;  // escape step, or the step where the cycle closed
};

/// Exact rational orbit of 0; undecided once the iterate exceeds `bit_budget`
/// bits or max_iter steps pass.
MembershipReport mandelbrot_member(const UnicriticalMap& m, int max_iter, std::size_t bit_budget = 1 << 14);

struct PcfReport {
  bool pcf = false;
  std::string reason;
  std::vector<mpz_class> orbit;  // integer orbit of 0 up to the repeat or escape
};
PcfReport is_pcf(const UnicriticalMap& m);

struct CrossCheck {
  Estimate generic;
  Estimate oracle;
  Real difference = 0;
  bool agree = false;
  bool exact_match = false;  // p-adic: equal rational multiples of log p
};
CrossCheck cross_check(const UnicriticalMap& m, int k, Place v);

/// Rationals c = n/q in [lo, hi] with q <= den_bound and max(|n|, q) <= max_height,
/// in increasing order, deduplicated.
std::vector<mpq_class> rationals_in_window(const mpq_class& lo, const mpq_class& hi, long den_bound, long max_height);

struct PcfHit {
  mpq_class c;
  PcfReport report;
};
/// Every c from rationals_in_window with a preperiodic critical orbit.
std::vector<PcfHit> pcf_scan(int d, const mpq_class& lo, const mpq_class& hi, long den_bound, long max_height);

/// Floating escape rate of 0 under z^d + c for complex c, switching to
/// log-magnitude once the orbit is large.
double complex_escape_rate(int d, double re, double im, int k);

}  // namespace relesc
