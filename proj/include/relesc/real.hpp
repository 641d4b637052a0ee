#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace relesc {

/// Working precision (decimal digits) for all archimedean computations.
inline constexpr unsigned kRealDigits = 60;

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<kRealDigits>,
    boost::multiprecision::et_off>;

/// Slack used when asserting equality of archimedean quantities.
inline const Real& real_slack() {
  static const Real slack("1e-30");
  return slack;
}

// MPFR keeps its exponent range per thread. Scaled iterations produce
// numbers like exp(-3^20), so every thread widens the range before use.
inline void ensure_exponent_range() {
  thread_local bool done = false;
  if (!done) {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    done = true;
  }
}

inline Real to_real(const mpz_class& z) {
  ensure_exponent_range();
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

inline Real to_real(const mpq_class& q) {
  ensure_exponent_range();
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

inline Real log_of(const mpz_class& z) {
  // log|z| without overflow for huge z: mpfr handles the exponent.
  return boost::multiprecision::log(boost::multiprecision::abs(to_real(z)));
}

inline Real log_of(const mpq_class& q) {
  return log_of(q.get_num()) - log_of(q.get_den());
}

inline const Real& real_log2() {
  thread_local const Real v = boost::multiprecision::log(Real(2));
  return v;
}

/// Fixed-format decimal rendering with `digits` significant digits.
std::string format_real(const Real& x, int digits);

}  // namespace relesc
