#pragma once

// Global heights over Q built from the local functionals.

#include <string>
#include <vector>

#include "relesc/divisors.hpp"

namespace relesc {

struct GlobalEstimate {
  Real value = 0;
  Real error = 0;
  std::vector<Place> places;
  int k = 0;
  bool fell_back = false;  // exact global iteration overflowed; summed per place
  std::string warning;
};

/// h(D) = sum_v log||F||_v = log max |c| for the canonical form.
Real height_divisor(const Divisor& D);
/// h(D) - h(D|_H) = sum_v lambda_v(D).
Real relative_height(const Divisor& D);
/// The same sum evaluated place by place over infinity and the primes
/// dividing the content of F|_H (all other places contribute 0).
Real relative_height_by_places(const Divisor& D);

Real point_height(const QVector& b);
Real matrix_height(const QMatrix& A);

/// Infinity, primes <= max(d, N!, 4N(N+1)), primes in the entries of L and
/// L^-1, and primes dividing the content of D|_H.
std::vector<Place> auto_places(const MinCritMap& f, const Divisor* D = nullptr);

/// Default truncation depth for the relative critical height.
int default_iterations(const MinCritMap& f);
/// Cap on the depth of exact p-adic iteration in per-place mode.
int padic_iteration_cap(int N);

/// (h_rel(f_*^k D)) / d^{kN} with error summed over `places`; if empty, the
/// automatic set is used. Falls back to per-place summation on overflow.
GlobalEstimate relative_canonical_height(const MinCritMap& f, const Divisor& D, int k,
                                         std::vector<Place> places = {},
                                         std::size_t bit_budget = kDefaultBitBudget);
GlobalEstimate relative_canonical_height_by_places(const MinCritMap& f, const Divisor& D, int k,
                                                   std::vector<Place> places = {},
                                                   std::size_t bit_budget = kDefaultBitBudget);

GlobalEstimate relative_critical_height(const MinCritMap& f, int k, std::vector<Place> places = {},
                                        std::size_t bit_budget = kDefaultBitBudget);

enum class Verdict { WithinBounds, Inconclusive, Violation };
std::string to_string(Verdict v);

struct MainBoundsReport {
  GlobalEstimate estimate;
  Real h_b = 0, h_A = 0;
  Real C1 = 0, C2 = 0;
  Real lower = 0, upper = 0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Constants C1, C2 of the global critical-height bounds.
Real main_bound_C1(int N, int d);
Real main_bound_C2(int N, int d);

MainBoundsReport thm_main_bounds(const MinCritMap& f, int k, std::vector<Place> places = {});

enum class Reduction { Good, Bad, HypothesisNotMet };
std::string to_string(Reduction r);

struct ReductionReport {
  Reduction result = Reduction::HypothesisNotMet;
  std::string reason;
  long epsilon = 0;         // -min v_p over the entries of L
  bool resultant_unit = false;  // v_p(det(p^eps L)^{d^N}) == 0
};

ReductionReport good_reduction(const MinCritMap& f, long p);

}  // namespace relesc
