#include "relesc/divisors.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include "relesc/errors.hpp"

namespace relesc {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// Divisor

Divisor Divisor::from_form(const Form& f) { return Divisor(primitive_part(f)); }
Divisor Divisor::from_form(const IntForm& f) { return Divisor(primitive_part(f)); }

Divisor Divisor::point(const mpq_class& z) {
  return from_form(Form::from_terms(2, 1, {{{1, 0}, 1}, {{0, 1}, -z}}));
}

Divisor Divisor::at_infinity(int N) {
  std::vector<int> e(static_cast<std::size_t>(N + 1), 0);
  e.back() = 1;
  return from_form(IntForm::monomial(N + 1, e, 1));
}

bool Divisor::contains_infinity() const {
  return restrict_to_infinity(form_).is_zero();
}

bool Divisor::contains_origin() const { return sgn(top_coefficient(form_)) == 0; }

Divisor operator+(const Divisor& a, const Divisor& b) { return Divisor::from_form(a.form_ * b.form_); }

// ---------------------------------------------------------------------------
// MinCritMap

MinCritMap MinCritMap::make(int d, QMatrix A, QVector b) {
  if (d < 2) throw UsageError("map degree must be >= 2");
  const int N = static_cast<int>(A.size());
  if (N < 1 || N + 1 > kMaxVars) throw UsageError("unsupported dimension N = " + std::to_string(N));
  if (!is_square(A, N)) throw UsageError("A must be square");
  if (static_cast<int>(b.size()) != N) throw UsageError("b must have length N");
  if (determinant(A) != 1) throw UsageError("A must have determinant 1");
  MinCritMap f;
  f.N = N;
  f.d = d;
  f.A = std::move(A);
  f.b = std::move(b);
  f.A_inv = inverse(f.A);
  const QVector bprime = matvec(f.A_inv, f.b);
  f.L = identity_matrix(N + 1);
  f.L_inv = identity_matrix(N + 1);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      f.L[i][j] = f.A[i][j];
      f.L_inv[i][j] = f.A_inv[i][j];
    }
    f.L[i][N] = f.b[i];
    f.L_inv[i][N] = -bprime[i];
  }
  if (matmul(f.L, f.L_inv) != identity_matrix(N + 1)) throw InternalError("L * L^-1 != I");
  return f;
}

MinCritMap MinCritMap::unicritical(int d, const mpq_class& c) { return make(d, {{mpq_class(1)}}, {c}); }

namespace {

Matrix<mpz_class> integer_multiple(const QMatrix& m) {
  mpz_class l = 1;
  for (const auto& row : m)
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Matrix<mpz_class> out(m.size(), std::vector<mpz_class>(m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      mpq_class s = m[i][j] * l;
      out[i][j] = s.get_num();
    }
  return out;
}

Matrix<Real> to_real_matrix(const QMatrix& m) {
  Matrix<Real> out(m.size(), std::vector<Real>(m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out[i][j] = to_real(m[i][j]);
  return out;
}

}  // namespace

Matrix<mpz_class> MinCritMap::L_int() const { return integer_multiple(L); }
Matrix<mpz_class> MinCritMap::L_inv_int() const { return integer_multiple(L_inv); }

// ---------------------------------------------------------------------------
// lambda, mu

LocalLog lambda_local(const Divisor& D, Place v) {
  const IntForm& f = D.form();
  return gauss_norm_log(f, v) - gauss_norm_log(restrict_to_infinity(f), v);
}

LocalLog mu_local(const Divisor& D, Place v) {
  const IntForm& f = D.form();
  if (D.num_vars() < 2) throw UsageError("mu needs at least two variables");
  if (D.contains_infinity()) throw DomainError("mu undefined: D contains H (slice 0 vanishes)");
  const mpz_class top = top_coefficient(f);
  if (sgn(top) == 0)
    throw DomainError("mu undefined: D contains the origin (slice " + std::to_string(D.degree()) + " vanishes)");
  const int deg = D.degree();
  const LocalLog ltop = log_abs(top, v);
  LocalLog best = LocalLog::pos_inf(v);
  for (int k = 0; k < deg; ++k) {
    IntForm s = slice(f, k);
    if (s.is_zero()) continue;
    best = min(best, mpq_class(1, deg - k) * (ltop - gauss_norm_log(s, v)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// push / pull

Divisor pushforward_power(const Divisor& D, int d) {
  return Divisor::from_form(power_pushforward(D.form(), d));
}

Divisor pullback_power(const Divisor& D, int d) {
  return Divisor::from_form(power_pullback(D.form(), d));
}

Divisor pushforward_linear(const MinCritMap& f, const Divisor& D) {
  if (D.N() != f.N) throw UsageError("divisor and map live on different spaces");
  return Divisor::from_form(substitute_linear(D.form(), f.L_inv_int()));
}

Divisor pullback_linear(const MinCritMap& f, const Divisor& D) {
  if (D.N() != f.N) throw UsageError("divisor and map live on different spaces");
  return Divisor::from_form(substitute_linear(D.form(), f.L_int()));
}

Divisor pushforward_map(const MinCritMap& f, const Divisor& D) {
  if (D.N() != f.N) throw UsageError("divisor and map live on different spaces");
  IntForm g = power_pushforward(D.form(), f.d);
  return Divisor::from_form(substitute_linear(primitive_part(g), f.L_inv_int()));
}

Divisor pullback_map(const MinCritMap& f, const Divisor& D) {
  if (D.N() != f.N) throw UsageError("divisor and map live on different spaces");
  return Divisor::from_form(power_pullback(substitute_linear(D.form(), f.L_int()), f.d));
}

Divisor pullback_translation(const QVector& c, const Divisor& D) {
  const int N = D.N();
  if (static_cast<int>(c.size()) != N) throw UsageError("translation vector has wrong length");
  QMatrix t = identity_matrix(N + 1);
  for (int i = 0; i < N; ++i) t[i][N] = c[i];
  return Divisor::from_form(substitute_linear(D.form(), integer_multiple(t)));
}

Divisor critical_divisor(const MinCritMap& f) {
  std::vector<int> e(static_cast<std::size_t>(f.N + 1), f.d - 1);
  e.back() = 0;
  return Divisor::from_form(IntForm::monomial(f.N + 1, e, 1));
}

Divisor branch_hyperplane(const MinCritMap& f, int i) {
  if (i < 0 || i >= f.N) throw UsageError("branch hyperplane index out of range");
  return Divisor::from_form(Form::linear(f.L_inv[static_cast<std::size_t>(i)]));
}

// ---------------------------------------------------------------------------
// Delta

Divisor pushforward_iterate(const MinCritMap& f, const Divisor& D, int k, std::size_t bit_budget) {
  Divisor cur = D;
  for (int j = 0; j < k; ++j) {
    cur = pushforward_map(f, cur);
    if (max_coeff_bits(cur.form()) > bit_budget)
      throw BudgetExceeded("coefficient size exceeded the bit budget after " + std::to_string(j + 1) +
                           " push-forwards");
  }
  return cur;
}

LocalLog delta_tail(const MinCritMap& f, int degree, int k, Place v) {
  const int N = f.N, d = f.d;
  const PlaceConstants pc = place_constants(N, d, v);
  const LocalLog normL = matrix_norm_log(f.L, v);
  const LocalLog normA = matrix_norm_log(f.A, v);
  const LocalLog inner = mpq_class(1, d) * (normL - normA + matrix_lambda(f.L, v) + matrix_lambda(f.A, v) + pc.c2) +
                         mpq_class(4 * N) * log_plus_int(2, v);
  mpz_class dk, dNk;
  mpz_pow_ui(dk.get_mpz_t(), mpz_class(d).get_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(dNk.get_mpz_t(), mpz_class(d).get_mpz_t(), static_cast<unsigned long>(N) * static_cast<unsigned long>(k));
  mpz_class dN;
  mpz_pow_ui(dN.get_mpz_t(), mpz_class(d).get_mpz_t(), static_cast<unsigned long>(N));
  // d^{-k}/(1-d^{-1}) = d/(d^k (d-1));  d^{-N(k+1)}/(1-d^{-N}) = 1/(d^{Nk}(d^N-1))
  const mpq_class geo(mpz_class(degree * d), mpz_class(dk * (d - 1)));
  const mpq_class geoN(mpz_class(1), mpz_class(dNk * (dN - 1)));
  return geo * inner + geoN * pc.c1;
}

namespace {

template <class C>
Real log_max_abs(const BasicForm<C>& f, bool slice0_only, int last) {
  Real best = 0;
  for (const auto& t : f.terms()) {
    if (slice0_only && t.mono.exponent(last) != 0) continue;
    Real a;
    if constexpr (std::is_same_v<C, Real>) a = mp::abs(t.coeff);
    else a = mp::abs(to_real(t.coeff));
    if (a > best) best = a;
  }
  return mp::log(best);
}

RealForm normalize(RealForm g) {
  Real m = 0;
  for (const auto& t : g.terms()) {
    Real a = mp::abs(t.coeff);
    if (a > m) m = a;
  }
  if (m == 0) throw InternalError("scaled iteration produced the zero form");
  g.scale(Real(1) / m);
  return g;
}

Estimate scaled_estimate(const MinCritMap& f, const Divisor& D, int k) {
  ensure_exponent_range();
  const Matrix<Real> linv = to_real_matrix(f.L_inv);
  RealForm g = normalize(D.form().map_coeffs<Real>([](const mpz_class& c) { return to_real(c); }));
  for (int j = 0; j < k; ++j) g = normalize(substitute_linear(power_pushforward(g, f.d), linv));
  const int last = f.N;
  const Real lam = log_max_abs(g, false, last) - log_max_abs(g, true, last);
  mpz_class dNk;
  mpz_pow_ui(dNk.get_mpz_t(), mpz_class(f.d).get_mpz_t(), static_cast<unsigned long>(f.N) * static_cast<unsigned long>(k));
  Estimate e;
  e.value = LocalLog::arch(lam / to_real(dNk));
  e.error = delta_tail(f, D.degree(), k, Place::infinity());
  e.k = k;
  e.place = Place::infinity();
  return e;
}

}  // namespace

Estimate delta_estimate(const MinCritMap& f, const Divisor& D, int k, Place v, DeltaMode mode,
                        std::size_t bit_budget) {
  if (k < 0) throw UsageError("iteration count must be non-negative");
  if (D.N() != f.N) throw UsageError("divisor and map live on different spaces");
  if (D.contains_infinity()) throw DomainError("Delta is undefined for divisors containing H");
  if (mode == DeltaMode::Auto) mode = v.is_archimedean() ? DeltaMode::Scaled : DeltaMode::Exact;
  if (mode == DeltaMode::Scaled) {
    if (!v.is_archimedean()) throw UsageError("scaled mode is only valid at the archimedean place");
    return scaled_estimate(f, D, k);
  }
  const Divisor it = pushforward_iterate(f, D, k, bit_budget);
  mpz_class dNk;
  mpz_pow_ui(dNk.get_mpz_t(), mpz_class(f.d).get_mpz_t(), static_cast<unsigned long>(f.N) * static_cast<unsigned long>(k));
  Estimate e;
  e.value = mpq_class(mpz_class(1), dNk) * lambda_local(it, v);
  e.error = delta_tail(f, D.degree(), k, v);
  e.k = k;
  e.place = v;
  return e;
}

Estimate delta_relative_critical(const MinCritMap& f, int k, Place v, DeltaMode mode, std::size_t bit_budget) {
  if (k < 0) throw UsageError("iteration count must be non-negative");
  Estimate e;
  e.k = k;
  e.place = v;
  if (k == 0) {
    e.value = LocalLog::zero(v);  // lambda(C_f) = 0
    e.error = delta_tail(f, f.N * (f.d - 1), 0, v);
    return e;
  }
  e.value = LocalLog::zero(v);
  e.error = LocalLog::zero(v);
  const mpq_class w(f.d - 1, f.d);
  for (int i = 0; i < f.N; ++i) {
    const Estimate part = delta_estimate(f, branch_hyperplane(f, i), k - 1, v, mode, bit_budget);
    e.value += w * part.value;
    e.error += w * part.error;
  }
  return e;
}

}  // namespace relesc
