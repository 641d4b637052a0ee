#include "relesc/heights.hpp"

#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <set>

#include "relesc/errors.hpp"
#include "relesc/primes.hpp"

namespace relesc {

namespace mp = boost::multiprecision;

namespace {

mpz_class max_abs(const IntForm& f, bool slice0_only) {
  mpz_class best = 0;
  const int last = f.num_vars() - 1;
  for (const auto& t : f.terms()) {
    if (slice0_only && t.mono.exponent(last) != 0) continue;
    if (abs(t.coeff) > best) best = abs(t.coeff);
  }
  return best;
}

mpz_class pow_int(long base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), mpz_class(base).get_mpz_t(), e);
  return r;
}

}  // namespace

Real height_divisor(const Divisor& D) { return log_of(max_abs(D.form(), false)); }

Real relative_height(const Divisor& D) {
  if (D.contains_infinity()) throw DomainError("relative height undefined: D contains H");
  const IntForm h = restrict_to_infinity(D.form());
  // sum over finite places of lambda_p is log content(F|_H)
  return log_of(max_abs(D.form(), false)) - log_of(max_abs(h, true)) + log_of(content(h));
}

Real relative_height_by_places(const Divisor& D) {
  if (D.contains_infinity()) throw DomainError("relative height undefined: D contains H");
  Real sum = lambda_local(D, Place::infinity()).to_real();
  for (const auto& p : prime_factors(content(restrict_to_infinity(D.form()))))
    sum += lambda_local(D, Place::prime(p.get_si())).to_real();
  return sum;
}

Real point_height(const QVector& b) {
  mpz_class l = 1;
  for (const auto& x : b) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  mpz_class best = l;
  for (const auto& x : b) {
    mpq_class s = x * l;
    if (abs(s.get_num()) > best) best = abs(s.get_num());
  }
  return log_of(best);
}

Real matrix_height(const QMatrix& A) {
  mpz_class l = 1;
  for (const auto& row : A)
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  mpz_class g = 0, best = 0;
  for (const auto& row : A)
    for (const auto& x : row) {
      mpq_class s = x * l;
      mpz_class n = abs(s.get_num());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
      if (n > best) best = n;
    }
  if (g == 0) throw UsageError("matrix height of the zero matrix");
  return log_of(mpz_class(best / g));
}

std::vector<Place> auto_places(const MinCritMap& f, const Divisor* D) {
  std::set<long> primes;
  const mpz_class bound = small_prime_bound(f.N, f.d);
  for (long p : primes_up_to(bound.get_si())) primes.insert(p);
  auto add = [&](const mpz_class& n) {
    if (n == 0) return;
    for (const auto& p : prime_factors(n)) {
      if (!p.fits_slong_p()) throw UsageError("prime factor too large for a place");
      primes.insert(p.get_si());
    }
  };
  for (const QMatrix* m : {&f.L, &f.L_inv})
    for (const auto& row : *m)
      for (const auto& x : row) {
        add(x.get_num());
        add(x.get_den());
      }
  if (D && !D->contains_infinity()) add(content(restrict_to_infinity(D->form())));
  std::vector<Place> out = {Place::infinity()};
  for (long p : primes) out.push_back(Place::prime(p));
  return out;
}

int default_iterations(const MinCritMap& f) {
  if (f.N == 1) return 20;
  if (f.N == 2) return f.d == 2 ? 5 : f.d == 3 ? 4 : 3;
  return 3;
}

int padic_iteration_cap(int N) { return N == 1 ? 8 : 5; }

namespace {

Real sum_tails(const MinCritMap& f, int degree, int k, const std::vector<Place>& places) {
  Real s = 0;
  for (const Place v : places) s += delta_tail(f, degree, k, v).to_real();
  return s;
}

}  // namespace

GlobalEstimate relative_canonical_height_by_places(const MinCritMap& f, const Divisor& D, int k,
                                                   std::vector<Place> places, std::size_t bit_budget) {
  if (places.empty()) places = auto_places(f, &D);
  GlobalEstimate g;
  g.k = k;
  g.places = places;
  for (const Place v : places) {
    if (v.is_archimedean()) {
      const Estimate e = delta_estimate(f, D, k, v, DeltaMode::Scaled);
      g.value += e.value.to_real();
      g.error += e.error.to_real();
      continue;
    }
    for (int kp = std::min(k, padic_iteration_cap(f.N));; --kp) {
      try {
        const Estimate e = delta_estimate(f, D, kp, v, DeltaMode::Exact, bit_budget);
        g.value += e.value.to_real();
        g.error += e.error.to_real();
        break;
      } catch (const BudgetExceeded&) {
        if (kp == 0) throw;
      }
    }
  }
  return g;
}

GlobalEstimate relative_canonical_height(const MinCritMap& f, const Divisor& D, int k, std::vector<Place> places,
                                         std::size_t bit_budget) {
  if (D.contains_infinity()) throw DomainError("relative canonical height undefined: D contains H");
  if (places.empty()) places = auto_places(f, &D);
  try {
    const Divisor it = pushforward_iterate(f, D, k, bit_budget);
    GlobalEstimate g;
    g.k = k;
    g.places = places;
    g.value = relative_height(it) / to_real(pow_int(f.d, static_cast<unsigned long>(f.N) * static_cast<unsigned long>(k)));
    g.error = sum_tails(f, D.degree(), k, places);
    return g;
  } catch (const BudgetExceeded& ex) {
    GlobalEstimate g = relative_canonical_height_by_places(f, D, k, places, bit_budget);
    g.fell_back = true;
    g.warning = std::string("exact global iteration abandoned (") + ex.what() + "); summed per place";
    return g;
  }
}

GlobalEstimate relative_critical_height(const MinCritMap& f, int k, std::vector<Place> places,
                                        std::size_t bit_budget) {
  if (k < 0) throw UsageError("iteration count must be non-negative");
  if (places.empty()) places = auto_places(f);
  GlobalEstimate g;
  g.k = k;
  g.places = places;
  if (k == 0) {
    g.error = sum_tails(f, f.N * (f.d - 1), 0, places);
    return g;
  }
  const Real w = Real(f.d - 1) / f.d;
  for (int i = 0; i < f.N; ++i) {
    const GlobalEstimate part = relative_canonical_height(f, branch_hyperplane(f, i), k - 1, places, bit_budget);
    g.value += w * part.value;
    g.error += w * part.error;
    if (part.fell_back) {
      g.fell_back = true;
      g.warning = part.warning;
    }
  }
  return g;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::WithinBounds: return "within-bounds";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Violation: return "violation";
  }
  return "?";
}

Real main_bound_C1(int N, int d) {
  const Real lf = log_of(factorial(N));
  Real sum_c9 = place_constants(N, d, Place::infinity()).c9.to_real();
  for (long p : primes_up_to(d)) sum_c9 += place_constants(N, d, Place::prime(p)).c9.to_real();
  return lf / (N * d) + mp::log(Real(N)) + Real(d - 1) / d * sum_c9;
}

Real main_bound_C2(int N, int d) {
  const Real lf = log_of(factorial(N));
  const Real lf1 = log_of(factorial(N + 1));
  const mpz_class dN = pow_int(d, static_cast<unsigned long>(N));
  const Real two_term = Real(4 * N * N * d) + Real(2 * N - 1) / to_real(mpz_class(dN - 1));
  return (N + 1) * lf + N * lf1 + lf + N * mp::log(Real(4 * N * (N + 1))) + two_term * real_log2();
}

MainBoundsReport thm_main_bounds(const MinCritMap& f, int k, std::vector<Place> places) {
  MainBoundsReport r;
  const int N = f.N, d = f.d;
  r.estimate = relative_critical_height(f, k, std::move(places));
  r.h_b = point_height(f.b);
  r.h_A = matrix_height(f.A);
  r.C1 = main_bound_C1(N, d);
  r.C2 = main_bound_C2(N, d);
  r.lower = Real(d - 1) / d * r.h_b - Real(N * (d * N + 1) - 1) / (N * d) * r.h_A - r.C1;
  r.upper = Real(N * (N + 2)) * r.h_b + Real(N * (N + 1)) * r.h_A + r.C2;
  const Real lo = r.estimate.value - r.estimate.error;
  const Real hi = r.estimate.value + r.estimate.error;
  if (hi < r.lower - real_slack() || lo > r.upper + real_slack()) r.verdict = Verdict::Violation;
  else if (lo >= r.lower && hi <= r.upper) r.verdict = Verdict::WithinBounds;
  else r.verdict = Verdict::Inconclusive;
  return r;
}

std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::Good: return "good";
    case Reduction::Bad: return "bad";
    case Reduction::HypothesisNotMet: return "hypothesis-not-met";
  }
  return "?";
}

ReductionReport good_reduction(const MinCritMap& f, long p) {
  const Place v = Place::prime(p);
  ReductionReport r;
  for (const auto& row : f.A)
    for (const auto& x : row)
      if (sgn(x) != 0 && valuation(x, p) < 0) {
        r.result = Reduction::HypothesisNotMet;
        r.reason = "A is not " + std::to_string(p) + "-integral";
        return r;
      }
  if (determinant(f.A) != 1) {
    r.reason = "det(A) != 1";
    return r;
  }
  bool b_integral = true;
  for (const auto& x : f.b)
    if (sgn(x) != 0 && valuation(x, p) < 0) b_integral = false;

  // scaling/resultant cross-check: p^eps L primitive, resultant det(p^eps L)^{d^N}
  long minv = 0;
  for (const auto& row : f.L)
    for (const auto& x : row)
      if (sgn(x) != 0) minv = std::min(minv, valuation(x, p));
  r.epsilon = -minv;
  const mpq_class det_scaled = determinant(f.L) * mpq_class(pow_int(p, static_cast<unsigned long>(r.epsilon * (f.N + 1))));
  const long vres = valuation(det_scaled, p) * pow_int(f.d, static_cast<unsigned long>(f.N)).get_si();
  r.resultant_unit = vres == 0;
  if (r.resultant_unit != b_integral)
    throw InternalError("integrality criterion and resultant test disagree at p = " + std::to_string(p));
  (void)v;
  r.result = b_integral ? Reduction::Good : Reduction::Bad;
  r.reason = b_integral ? "entries of b are " + std::to_string(p) + "-integral"
                        : "some entry of b is not " + std::to_string(p) + "-integral";
  return r;
}

}  // namespace relesc
