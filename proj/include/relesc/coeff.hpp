#pragma once

// Coefficient-type glue shared by the generic form code: zero tests,
// fused multiply-add and exactness flags for GMP integers/rationals and
// MPFR reals.

#include <gmpxx.h>

#include "relesc/real.hpp"

namespace relesc {

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<mpz_class> {
  static constexpr bool exact = true;
  static bool is_zero(const mpz_class& x) { return sgn(x) == 0; }
  static void fma(mpz_class& acc, const mpz_class& a, const mpz_class& b) {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  static mpz_class from_int(long v) { return mpz_class(v); }
};

template <>
struct CoeffTraits<mpq_class> {
  static constexpr bool exact = true;
  static bool is_zero(const mpq_class& x) { return sgn(x) == 0; }
  static void fma(mpq_class& acc, const mpq_class& a, const mpq_class& b) {
    acc += a * b;
  }
  static mpq_class from_int(long v) { return mpq_class(v); }
};

template <>
struct CoeffTraits<Real> {
  static constexpr bool exact = false;
  static bool is_zero(const Real& x) { return x == 0; }
  static void fma(Real& acc, const Real& a, const Real& b) { acc += a * b; }
  static Real from_int(long v) { return Real(v); }
};

}  // namespace relesc
