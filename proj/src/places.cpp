#include "relesc/places.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include "relesc/errors.hpp"
#include "relesc/primes.hpp"

namespace relesc {

namespace mp = boost::multiprecision;

Place Place::prime(long p) {
  if (!is_prime(p)) throw UsageError("not a prime: " + std::to_string(p));
  return Place(p);
}

Place Place::parse(const std::string& s) {
  if (s == "inf" || s == "infty" || s == "oo") return infinity();
  std::size_t used = 0;
  long p = 0;
  try {
    p = std::stol(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad place '" + s + "': expected inf or a prime");
  }
  if (used != s.size()) throw UsageError("bad place '" + s + "': expected inf or a prime");
  return prime(p);
}

// ---------------------------------------------------------------------------

LocalLog LocalLog::arch(Real x) {
  LocalLog r(Place::infinity());
  r.real_ = std::move(x);
  return r;
}

LocalLog LocalLog::padic(long p, mpq_class q) {
  LocalLog r(Place::prime(p));
  r.rat_ = std::move(q);
  return r;
}

LocalLog LocalLog::neg_inf(Place v) {
  LocalLog r(v);
  r.kind_ = Kind::NegInf;
  return r;
}

LocalLog LocalLog::pos_inf(Place v) {
  LocalLog r(v);
  r.kind_ = Kind::PosInf;
  return r;
}

const mpq_class& LocalLog::log_p_multiple() const {
  if (place_.is_archimedean() || !is_finite())
    throw UsageError("log_p_multiple needs a finite p-adic value");
  return rat_;
}

Real LocalLog::to_real() const {
  ensure_exponent_range();
  if (kind_ == Kind::PosInf) return std::numeric_limits<Real>::infinity();
  if (kind_ == Kind::NegInf) return -std::numeric_limits<Real>::infinity();
  if (place_.is_archimedean()) return real_;
  return relesc::to_real(rat_) * mp::log(Real(place_.p()));
}

void LocalLog::check_same(const LocalLog& o) const {
  if (!(place_ == o.place_))
    throw UsageError("mixing values at places " + place_.name() + " and " + o.place_.name());
}

LocalLog LocalLog::operator-() const {
  LocalLog r = *this;
  if (kind_ == Kind::PosInf) r.kind_ = Kind::NegInf;
  else if (kind_ == Kind::NegInf) r.kind_ = Kind::PosInf;
  else if (place_.is_archimedean()) r.real_ = -real_;
  else r.rat_ = -rat_;
  return r;
}

LocalLog& LocalLog::operator+=(const LocalLog& o) {
  check_same(o);
  // inf + x = inf, including x = -inf
  if (kind_ == Kind::PosInf || o.kind_ == Kind::PosInf) {
    kind_ = Kind::PosInf;
    return *this;
  }
  if (kind_ == Kind::NegInf || o.kind_ == Kind::NegInf) {
    kind_ = Kind::NegInf;
    return *this;
  }
  if (place_.is_archimedean()) real_ += o.real_;
  else rat_ += o.rat_;
  return *this;
}

LocalLog operator*(const mpq_class& s, const LocalLog& x) {
  if (!x.is_finite()) {
    if (sgn(s) == 0) return LocalLog::zero(x.place_);
    return sgn(s) > 0 ? x : -x;
  }
  LocalLog r = x;
  if (x.place_.is_archimedean()) r.real_ = relesc::to_real(s) * x.real_;
  else r.rat_ = s * x.rat_;
  return r;
}

std::partial_ordering operator<=>(const LocalLog& a, const LocalLog& b) {
  a.check_same(b);
  auto rank = [](const LocalLog& x) {
    return x.kind_ == LocalLog::Kind::NegInf ? 0 : x.kind_ == LocalLog::Kind::Finite ? 1 : 2;
  };
  if (rank(a) != 1 || rank(b) != 1) return rank(a) <=> rank(b);
  if (a.place_.is_archimedean()) {
    if (a.real_ < b.real_) return std::partial_ordering::less;
    if (a.real_ > b.real_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  const int c = cmp(a.rat_, b.rat_);
  return c < 0 ? std::partial_ordering::less
               : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

bool LocalLog::le_with_slack(const LocalLog& a, const LocalLog& b) {
  if (a.place_.is_archimedean() && a.is_finite() && b.is_finite()) {
    a.check_same(b);
    return a.real_ <= b.real_ + real_slack();
  }
  return a <= b;
}

std::string LocalLog::to_string(int digits) const {
  if (kind_ == Kind::PosInf) return "inf";
  if (kind_ == Kind::NegInf) return "-inf";
  if (place_.is_archimedean()) return format_real(real_, digits);
  return rat_.get_str() + "*log(" + std::to_string(place_.p()) + ")";
}

LocalLog max(const LocalLog& a, const LocalLog& b) { return a < b ? b : a; }
LocalLog min(const LocalLog& a, const LocalLog& b) { return b < a ? b : a; }
LocalLog log_plus(const LocalLog& x) { return max(x, LocalLog::zero(x.place())); }

// ---------------------------------------------------------------------------

long valuation(const mpz_class& n, long p) {
  if (n == 0) throw UsageError("valuation of zero");
  mpz_class rest;
  mpz_class pp = p;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long valuation(const mpq_class& q, long p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

LocalLog log_abs(const mpq_class& x, Place v) {
  if (sgn(x) == 0) return LocalLog::neg_inf(v);
  if (v.is_archimedean()) return LocalLog::arch(log_of(x));
  return LocalLog::padic(v.p(), mpq_class(-valuation(x, v.p())));
}

LocalLog log_abs(const mpz_class& x, Place v) { return log_abs(mpq_class(x), v); }

LocalLog log_plus_int(const mpz_class& n, Place v) {
  if (n < 1) throw UsageError("log_plus_int needs a positive integer");
  if (!v.is_archimedean()) return LocalLog::zero(v);
  return LocalLog::arch(log_of(n));
}

LocalLog log_plus_int(long n, Place v) { return log_plus_int(mpz_class(n), v); }

namespace {

template <class Range, class Get>
LocalLog max_log(const Range& r, Place v, Get get) {
  if (v.is_archimedean()) {
    // compare exactly, take one log
    mpq_class best = 0;
    for (const auto& x : r) {
      mpq_class a = abs(mpq_class(get(x)));
      if (a > best) best = a;
    }
    return log_abs(best, v);
  }
  bool any = false;
  long vmin = 0;
  for (const auto& x : r) {
    const mpq_class q(get(x));
    if (sgn(q) == 0) continue;
    const long val = valuation(q, v.p());
    if (!any || val < vmin) vmin = val;
    any = true;
  }
  if (!any) return LocalLog::neg_inf(v);
  return LocalLog::padic(v.p(), mpq_class(-vmin));
}

}  // namespace

LocalLog gauss_norm_log(const Form& f, Place v) {
  return max_log(f.terms(), v, [](const Term<mpq_class>& t) -> const mpq_class& { return t.coeff; });
}

LocalLog gauss_norm_log(const IntForm& f, Place v) {
  return max_log(f.terms(), v, [](const Term<mpz_class>& t) { return mpq_class(t.coeff); });
}

LocalLog gauss_norm_log(const QVector& x, Place v) {
  return max_log(x, v, [](const mpq_class& q) -> const mpq_class& { return q; });
}

LocalLog matrix_norm_log(const QMatrix& m, Place v) {
  QVector all;
  for (const auto& row : m) all.insert(all.end(), row.begin(), row.end());
  return gauss_norm_log(all, v);
}

mpz_class factorial(int n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

namespace {

void require_sl(const QMatrix& a) {
  const int n = static_cast<int>(a.size());
  if (!is_square(a, n) || n == 0) throw UsageError("matrix must be square");
  if (determinant(a) != 1) throw UsageError("matrix must have determinant 1");
}

}  // namespace

LocalLog matrix_lambda(const QMatrix& a, Place v) {
  require_sl(a);
  const int n = static_cast<int>(a.size());
  return mpq_class(n) * matrix_norm_log(a, v) + log_plus_int(factorial(n), v);
}

LocalLog matrix_xi(const QMatrix& a, Place v) {
  require_sl(a);
  const int n = static_cast<int>(a.size());
  return matrix_norm_log(a, v) + matrix_norm_log(inverse(a), v) + log_plus_int(n, v);
}

mpz_class small_prime_bound(int N, int d) {
  mpz_class b = d;
  b = std::max(b, factorial(N));
  b = std::max(b, mpz_class(4 * N * (N + 1)));
  return b;
}

PlaceConstants place_constants(int N, int d, Place v) {
  if (N < 1 || d < 2) throw UsageError("place_constants needs N >= 1 and d >= 2");
  PlaceConstants c;
  const LocalLog lp2 = log_plus_int(2, v);
  c.c1 = mpq_class(2 * N - 1) * lp2;
#ifdef RELESC_MUTATE_HALVE_C1
  c.c1 = mpq_class(1, 2) * c.c1;
#endif
  c.c2 = log_plus_int(4 * N * (N + 1), v);
  c.c5 = log_plus_int(N, v) + mpq_class(N) * lp2 + mpq_class(1, N) * log_plus_int(factorial(N), v);

  if (v.is_archimedean()) {
    ensure_exponent_range();
    c.c3 = LocalLog::arch(Real(N + 2) * real_log2() + mp::log(Real(N)));
    c.c4 = LocalLog::zero(v);
    if (N == 1) {
      c.c8 = LocalLog::zero(v);
    } else {
      const Real dd = d;
      const Real dN1 = mp::pow(dd, N + 1);
      c.c8 = LocalLog::arch(Real(2 * (N - 1)) * (dN1 - dd + 1) / (dd - mp::sqrt(dd)));
    }
  } else {
    // Divided derivatives of integral forms are integral, so the
    // translation estimate holds with c3 = c4 = 0 at every prime; we keep
    // log p/(p-1) for p <= d only.
    const bool small = v.p() <= d;
    c.c3 = small ? LocalLog::padic(v.p(), mpq_class(1, v.p() - 1)) : LocalLog::zero(v);
    c.c4 = c.c3;
    c.c8 = LocalLog::zero(v);
  }

  // c9 = max{0, second, third}
  const mpq_class inv_dm1(1, d - 1);
  mpz_class dN;
  mpz_pow_ui(dN.get_mpz_t(), mpz_class(d).get_mpz_t(), static_cast<unsigned long>(N));
  const mpq_class dNm1 = mpq_class(dN - 1);
  LocalLog second = inv_dm1 * log_plus_int(2 * N, v) + (mpq_class(N) / dNm1) * lp2 -
                    mpq_class(1, N * (d - 1)) * log_plus_int(factorial(N), v);
  LocalLog c8_term = LocalLog::zero(v);
  if (v.is_archimedean()) c8_term = LocalLog::arch(c.c8.to_real() * (mp::sqrt(Real(d)) - 1));
  LocalLog third = c8_term + c.c3 + c.c5 + mpq_class(2 * d * N + 1) * lp2 +
                   mpq_class(mpz_class(2 * N - 2 + d * N * (dN - 1))) * log_plus_int(d, v);
  third = inv_dm1 * third;
  c.c9 = max(LocalLog::zero(v), max(second, third));
  return c;
}

}  // namespace relesc
