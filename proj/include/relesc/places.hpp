#pragma once

// Places of Q and log-scale values attached to them.

#include <gmpxx.h>

#include <compare>
#include <string>
#include <vector>

#include "relesc/forms.hpp"
#include "relesc/matrix.hpp"
#include "relesc/real.hpp"

namespace relesc {

class Place {
 public:
  static Place infinity() { return Place(0); }
  static Place prime(long p);
  /// "inf" or a prime written in decimal.
  static Place parse(const std::string& s);

  bool is_archimedean() const { return p_ == 0; }
  long p() const { return p_; }
  std::string name() const { return p_ == 0 ? "inf" : std::to_string(p_); }
  mpq_class weight() const { return 1; }

  friend bool operator==(Place a, Place b) { return a.p_ == b.p_; }
  friend auto operator<=>(Place a, Place b) {
    // inf sorts first
    return a.p_ <=> b.p_;
  }

 private:
  explicit Place(long p) : p_(p) {}
  long p_;
};

/// log|x|_v for some fixed place v. Archimedean values are reals; p-adic
/// values are exact rationals r standing for r*log p. The infinities are
/// shared by all places.
class LocalLog {
 public:
  enum class Kind { Finite, NegInf, PosInf };

  LocalLog() : LocalLog(Place::infinity()) {}
  /// Zero at place v.
  explicit LocalLog(Place v) : place_(v) {}

  static LocalLog arch(Real x);
  static LocalLog padic(long p, mpq_class r);
  static LocalLog zero(Place v) { return LocalLog(v); }
  static LocalLog neg_inf(Place v);
  static LocalLog pos_inf(Place v);

  Place place() const { return place_; }
  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }

  /// The rational r with value r*log p; UsageError unless finite p-adic.
  const mpq_class& log_p_multiple() const;
  /// Numeric value (archimedean real, or r*log p); infinities map to +-inf.
  Real to_real() const;

  LocalLog operator-() const;
  LocalLog& operator+=(const LocalLog& o);
  LocalLog& operator-=(const LocalLog& o) { return *this += -o; }
  friend LocalLog operator+(LocalLog a, const LocalLog& b) { return a += b; }
  friend LocalLog operator-(LocalLog a, const LocalLog& b) { return a -= b; }
  /// Scaling by a rational; exact p-adically. Scaling an infinity by a
  /// positive number keeps it, by a negative number flips it.
  friend LocalLog operator*(const mpq_class& s, const LocalLog& x);

  /// Exact comparison p-adically, plain comparison archimedean.
  friend std::partial_ordering operator<=>(const LocalLog& a, const LocalLog& b);
  friend bool operator==(const LocalLog& a, const LocalLog& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

  /// a <= b up to the archimedean comparison slack (exact p-adically).
  static bool le_with_slack(const LocalLog& a, const LocalLog& b);

  std::string to_string(int digits = 30) const;

 private:
  void check_same(const LocalLog& o) const;

  Place place_;
  Kind kind_ = Kind::Finite;
  Real real_ = 0;
  mpq_class rat_ = 0;
};

LocalLog max(const LocalLog& a, const LocalLog& b);
LocalLog min(const LocalLog& a, const LocalLog& b);
/// log+ x = max(x, 0).
LocalLog log_plus(const LocalLog& x);

/// p-adic valuation of a nonzero integer/rational.
long valuation(const mpz_class& n, long p);
long valuation(const mpq_class& q, long p);

LocalLog log_abs(const mpq_class& x, Place v);
LocalLog log_abs(const mpz_class& x, Place v);
/// log+|n|_v for a positive integer n; zero at every prime.
LocalLog log_plus_int(const mpz_class& n, Place v);
LocalLog log_plus_int(long n, Place v);

LocalLog gauss_norm_log(const Form& f, Place v);
LocalLog gauss_norm_log(const IntForm& f, Place v);
LocalLog gauss_norm_log(const QVector& x, Place v);
LocalLog matrix_norm_log(const QMatrix& m, Place v);

/// lambda(A) = n log||A|| + log+|n!| for A in SL_n; UsageError if det != 1.
LocalLog matrix_lambda(const QMatrix& a, Place v);
/// xi(A) = log||A|| + log||A^-1|| + log+|n| for A in SL_n.
LocalLog matrix_xi(const QMatrix& a, Place v);

struct PlaceConstants {
  LocalLog c1, c2, c3, c4, c5, c8, c9;
};

/// max(d, N!, 4N(N+1)): primes above this bound see no nonzero constant.
mpz_class small_prime_bound(int N, int d);

PlaceConstants place_constants(int N, int d, Place v);

mpz_class factorial(int n);

}  // namespace relesc
