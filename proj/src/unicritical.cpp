#include "relesc/unicritical.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <complex>
#include <set>

#include "relesc/errors.hpp"

namespace relesc {

namespace mp = boost::multiprecision;

UnicriticalMap::UnicriticalMap(int d_, mpq_class c_) : d(d_), c(std::move(c_)) {
  if (d < 2) throw UsageError("degree must be at least 2");
  c.canonicalize();
}

Real UnicriticalMap::escape_radius() const {
  const Real r = mp::pow(Real(2), Real(1) / (d - 1));
  const Real ac = mp::abs(to_real(c));
  return (ac > r ? ac : r) + 1;
}

namespace {

// Switch to log-magnitude iteration past this size; |c/z^d| is then negligible
// against the working precision.
const Real& big_threshold() {
  static const Real t = mp::pow(Real(10), 400);
  return t;
}

Real arch_rate(const UnicriticalMap& m, int k) {
  ensure_exponent_range();
  Real z = 0;
  const Real c = to_real(m.c);
  int i = 0;
  for (; i < k; ++i) {
    z = mp::pow(z, m.d) + c;
    if (mp::abs(z) > big_threshold()) {
      ++i;
      break;
    }
  }
  Real lz = z == 0 ? Real(0) : mp::log(mp::abs(z));
  for (; i < k; ++i) lz = m.d * lz;  // log|z^d + c| = d log|z| + O(|c| |z|^-d)
  if (lz < 0) lz = 0;
  return lz / mp::pow(Real(m.d), k);
}

// -v(f^k(0))/d^k clipped at 0, the multiple of log p in log+|f^k(0)|_p / d^k.
mpq_class padic_rate(const UnicriticalMap& m, int k, long p) {
  if (sgn(m.c) == 0) return 0;
  const long vc = valuation(m.c, p);
  if (vc >= 0) return 0;  // integral orbit
  // v(z_1) = v(c) < 0 and v(z_{j+1}) = d v(z_j) since d v(z_j) < v(c).
  mpz_class vz = vc;
  for (int j = 1; j < k; ++j) {
    if (m.d * vz >= vc) throw InternalError("valuation recursion left the escaping regime");
    vz *= m.d;
  }
  mpz_class dk;
  mpz_pow_ui(dk.get_mpz_t(), mpz_class(m.d).get_mpz_t(), static_cast<unsigned long>(k));
  mpq_class r(-vz, dk);
  r.canonicalize();
  return r;
}

}  // namespace

Estimate escape_rate_oracle(const UnicriticalMap& m, int k, Place v) {
  if (k < 1) throw UsageError("escape rate needs k >= 1");
  const MinCritMap f = m.embedding();
  Estimate e;
  e.k = k;
  e.place = v;
  e.value = v.is_archimedean() ? LocalLog::arch(arch_rate(m, k)) : LocalLog::padic(v.p(), padic_rate(m, k, v.p()));
  e.error = delta_tail(f, 1, k, v);
  return e;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Escaped: return "escaped";
    case Membership::Undecided: return "undecided";
  }
  return "?";
}

MembershipReport mandelbrot_member(const UnicriticalMap& m, int max_iter, std::size_t bit_budget) {
  const Real R = m.escape_radius();
  std::set<mpq_class> seen;
  mpq_class z = 0;
  seen.insert(z);
  for (int i = 1; i <= max_iter; ++i) {
    mpq_class zd = 1;
    for (int j = 0; j < m.d; ++j) zd *= z;
    z = zd + m.c;
    if (mp::abs(to_real(z)) > R) return {Membership::Escaped, i};
    if (!seen.insert(z).second) return {Membership::Inside, i};
    if (mpz_sizeinbase(z.get_num_mpz_t(), 2) + mpz_sizeinbase(z.get_den_mpz_t(), 2) > bit_budget) break;
  }
  return {Membership::Undecided, 0};
}

PcfReport is_pcf(const UnicriticalMap& m) {
  PcfReport r;
  if (m.c.get_den() != 1) {
    r.reason = "c is not an integer: bad reduction forces p-adic escape";
    return r;
  }
  const mpz_class c = m.c.get_num();
  const Real R = m.escape_radius();
  std::set<mpz_class> seen;
  mpz_class z = 0;
  r.orbit.push_back(z);
  seen.insert(z);
  // integers of absolute value <= R are finitely many, so this terminates
  for (;;) {
    mpz_class zd;
    mpz_pow_ui(zd.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(m.d));
    z = zd + c;
    r.orbit.push_back(z);
    if (mp::abs(to_real(z)) > R) {
      r.reason = "orbit escapes past the radius";
      return r;
    }
    if (!seen.insert(z).second) {
      r.pcf = true;
      r.reason = "orbit of 0 is preperiodic";
      return r;
    }
  }
}

CrossCheck cross_check(const UnicriticalMap& m, int k, Place v) {
  CrossCheck x;
  x.generic = delta_estimate(m.embedding(), Divisor::point(0), k, v);
  x.oracle = escape_rate_oracle(m, k, v);
  x.difference = mp::abs(x.generic.value.to_real() - x.oracle.value.to_real());
  x.agree = x.difference <= x.generic.error.to_real() + x.oracle.error.to_real() + real_slack();
  if (!v.is_archimedean()) x.exact_match = x.generic.value == x.oracle.value;
  return x;
}

std::vector<mpq_class> rationals_in_window(const mpq_class& lo, const mpq_class& hi, long den_bound, long max_height) {
  if (den_bound < 1) throw UsageError("denominator bound must be positive");
  std::set<mpq_class> out;
  for (long q = 1; q <= den_bound && q <= max_height; ++q) {
    mpq_class lq = lo * q, hq = hi * q;
    mpz_class n0, n1;
    mpz_cdiv_q(n0.get_mpz_t(), lq.get_num_mpz_t(), lq.get_den_mpz_t());
    mpz_fdiv_q(n1.get_mpz_t(), hq.get_num_mpz_t(), hq.get_den_mpz_t());
    if (n0 < -max_height) n0 = -max_height;
    if (n1 > max_height) n1 = max_height;
    for (mpz_class n = n0; n <= n1; ++n) {
      mpq_class x(n, q);
      x.canonicalize();
      out.insert(x);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<PcfHit> pcf_scan(int d, const mpq_class& lo, const mpq_class& hi, long den_bound, long max_height) {
  std::vector<PcfHit> out;
  for (const auto& c : rationals_in_window(lo, hi, den_bound, max_height)) {
    PcfReport r = is_pcf(UnicriticalMap(d, c));
    if (r.pcf) out.push_back({c, std::move(r)});
  }
  return out;
}

double complex_escape_rate(int d, double re, double im, int k) {
  const std::complex<double> c(re, im);
  std::complex<double> z = 0;
  int i = 0;
  for (; i < k; ++i) {
    std::complex<double> zd = 1;
    for (int j = 0; j < d; ++j) zd *= z;
    z = zd + c;
    if (std::abs(z) > 1e20) {
      ++i;
      break;
    }
  }
  double lz = std::log(std::abs(z));
  if (!std::isfinite(lz)) lz = 0;
  for (; i < k; ++i) lz *= d;
  return lz > 0 ? lz / std::pow(double(d), k) : 0.0;
}

}  // namespace relesc
