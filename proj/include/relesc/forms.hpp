#pragma once

// Sparse homogeneous forms in a small number of variables over an exact or
// floating coefficient type, with the operations needed to push divisors
// around on P^N: products, linear substitution, the d-th power map
// pull-back, and the push-forward along the power map.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relesc/coeff.hpp"
#include "relesc/cyclotomic.hpp"
#include "relesc/errors.hpp"

namespace relesc {

inline constexpr int kMaxVars = 4;
inline constexpr int kMaxExponent = 0xFFFF;

/// Exponent tuple packed 16 bits per variable, variable 0 in the most
/// significant field, so integer order on the key is lexicographic order on
/// the tuple and adding keys multiplies monomials.
class Monomial {
 public:
  constexpr Monomial() = default;

  static Monomial from_exponents(std::span<const int> exps) {
    if (exps.size() > static_cast<std::size_t>(kMaxVars))
      throw UsageError("at most " + std::to_string(kMaxVars) + " variables supported");
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] < 0 || exps[i] > kMaxExponent)
        throw UsageError("exponent out of range: " + std::to_string(exps[i]));
      m.bits_ |= static_cast<std::uint64_t>(exps[i]) << shift(static_cast<int>(i));
    }
    return m;
  }
  static Monomial from_exponents(std::initializer_list<int> exps) {
    return from_exponents(std::span<const int>(exps.begin(), exps.size()));
  }
  static Monomial variable_power(int var, int e) {
    Monomial m;
    m.bits_ = static_cast<std::uint64_t>(e) << shift(var);
    return m;
  }

  int exponent(int var) const {
    return static_cast<int>((bits_ >> shift(var)) & 0xFFFFu);
  }
  Monomial with_exponent(int var, int e) const {
    Monomial m = *this;
    m.bits_ &= ~(std::uint64_t{0xFFFF} << shift(var));
    m.bits_ |= static_cast<std::uint64_t>(e) << shift(var);
    return m;
  }
  std::vector<int> exponents(int num_vars) const {
    std::vector<int> e(static_cast<std::size_t>(num_vars));
    for (int i = 0; i < num_vars; ++i) e[static_cast<std::size_t>(i)] = exponent(i);
    return e;
  }

  std::uint64_t key() const { return bits_; }
  static Monomial from_key(std::uint64_t k) {
    Monomial m;
    m.bits_ = k;
    return m;
  }
  Monomial operator+(Monomial o) const {
    Monomial m;
    m.bits_ = bits_ + o.bits_;
    return m;
  }
  auto operator<=>(const Monomial&) const = default;

 private:
  static constexpr int shift(int var) { return 16 * (kMaxVars - 1 - var); }
  std::uint64_t bits_ = 0;
};

template <class C>
struct Term {
  Monomial mono;
  C coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Homogeneous form with terms kept sorted in descending lexicographic order
/// of exponent tuples (X1^deg first). No stored coefficient is zero; the zero
/// form has no terms but keeps its degree.
template <class C>
class BasicForm {
 public:
  using Coeff = C;

  BasicForm() = default;
  BasicForm(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
    if (num_vars < 1 || num_vars > kMaxVars)
      throw UsageError("number of variables must be in [1, " + std::to_string(kMaxVars) + "]");
    if (degree < 0 || degree > kMaxExponent) throw UsageError("degree out of range");
  }

  /// Builds a form from (exponents, coefficient) pairs, merging duplicates
  /// and dropping zeros. Every exponent tuple must have length num_vars and
  /// sum to degree.
  static BasicForm from_terms(int num_vars, int degree,
                              const std::vector<std::pair<std::vector<int>, C>>& terms) {
    BasicForm f(num_vars, degree);
    std::unordered_map<std::uint64_t, C> acc;
    for (const auto& [exps, c] : terms) {
      if (static_cast<int>(exps.size()) != num_vars)
        throw UsageError("exponent tuple has wrong length");
      long sum = 0;
      for (int e : exps) sum += e;
      if (sum != degree)
        throw UsageError("exponent tuple does not sum to the form degree");
      acc[Monomial::from_exponents(exps).key()] += c;
    }
    f.assign_from(acc);
    return f;
  }

  static BasicForm monomial(int num_vars, std::span<const int> exps, const C& c) {
    int deg = 0;
    for (int e : exps) deg += e;
    BasicForm f(num_vars, deg);
    if (static_cast<int>(exps.size()) != num_vars)
      throw UsageError("exponent tuple has wrong length");
    if (!CoeffTraits<C>::is_zero(c)) f.terms_.push_back({Monomial::from_exponents(exps), c});
    return f;
  }

  static BasicForm constant(int num_vars, const C& c) {
    BasicForm f(num_vars, 0);
    if (!CoeffTraits<C>::is_zero(c)) f.terms_.push_back({Monomial{}, c});
    return f;
  }

  /// Linear form sum_j row[j] * X_j.
  static BasicForm linear(std::span<const C> row) {
    BasicForm f(static_cast<int>(row.size()), 1);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!CoeffTraits<C>::is_zero(row[j]))
        f.terms_.push_back({Monomial::variable_power(static_cast<int>(j), 1), row[j]});
    return f;
  }

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::span<const Term<C>> terms() const { return terms_; }

  C coeff(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term<C>& t, Monomial k) { return t.mono > k; });
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return C{};
  }
  C coeff(std::initializer_list<int> exps) const { return coeff(Monomial::from_exponents(exps)); }

  /// Applies `fn` to every coefficient; zero results are dropped.
  template <class D, class Fn>
  BasicForm<D> map_coeffs(Fn&& fn) const {
    BasicForm<D> out(num_vars_, degree_);
    auto& dst = out.mutable_terms();
    dst.reserve(terms_.size());
    for (const auto& t : terms_) {
      D c = fn(t.coeff);
      if (!CoeffTraits<D>::is_zero(c)) dst.push_back({t.mono, std::move(c)});
    }
    return out;
  }

  BasicForm& operator+=(const BasicForm& o) {
    check_compatible(o);
    std::vector<Term<C>> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->mono > b->mono)) {
        merged.push_back(std::move(*a++));
      } else if (a == terms_.end() || b->mono > a->mono) {
        merged.push_back(*b++);
      } else {
        C c = a->coeff + b->coeff;
        if (!CoeffTraits<C>::is_zero(c)) merged.push_back({a->mono, std::move(c)});
        ++a;
        ++b;
      }
    }
    terms_ = std::move(merged);
    return *this;
  }

  BasicForm& scale(const C& s) {
    if (CoeffTraits<C>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.coeff *= s;
    return *this;
  }

  friend bool operator==(const BasicForm& a, const BasicForm& b) {
    return a.num_vars_ == b.num_vars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  // Internal access for the generic algorithms below; keeps terms sorted
  // only if callers do.
  std::vector<Term<C>>& mutable_terms() { return terms_; }

  void assign_from(std::unordered_map<std::uint64_t, C>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [k, c] : acc) {
      if (CoeffTraits<C>::is_zero(c)) continue;
      terms_.push_back({Monomial::from_key(k), std::move(c)});
    }
    sort_terms();
  }

  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term<C>& x, const Term<C>& y) { return x.mono > y.mono; });
  }

  void check_compatible(const BasicForm& o) const {
    if (o.num_vars_ != num_vars_) throw UsageError("forms have different numbers of variables");
    if (o.degree_ != degree_) throw UsageError("cannot add forms of different degrees");
  }

 private:
  int num_vars_ = 1;
  int degree_ = 0;
  std::vector<Term<C>> terms_;
};

using Form = BasicForm<mpq_class>;
using IntForm = BasicForm<mpz_class>;
using RealForm = BasicForm<Real>;

template <class C>
using Matrix = std::vector<std::vector<C>>;

// ---------------------------------------------------------------------------
// Products

template <class C>
BasicForm<C> operator*(const BasicForm<C>& a, const BasicForm<C>& b) {
  if (a.num_vars() != b.num_vars())
    throw UsageError("forms have different numbers of variables");
  const int deg = a.degree() + b.degree();
  if (deg > kMaxExponent) throw UsageError("product degree out of range");
  BasicForm<C> out(a.num_vars(), deg);
  if (a.is_zero() || b.is_zero()) return out;
  std::unordered_map<std::uint64_t, C> acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 22));
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      CoeffTraits<C>::fma(acc[(ta.mono + tb.mono).key()], ta.coeff, tb.coeff);
  out.assign_from(acc);
  return out;
}

template <class C>
BasicForm<C> form_product(std::span<const BasicForm<C>> fs) {
  if (fs.empty()) throw UsageError("form_product needs at least one form");
  BasicForm<C> acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = acc * fs[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Slices by powers of the last variable

/// F_k in F = sum_k X_{n}^k F_k(X_1..X_{n-1}); a form in num_vars-1 variables
/// of degree deg(F)-k.
template <class C>
BasicForm<C> slice(const BasicForm<C>& f, int k) {
  if (f.num_vars() < 2) throw UsageError("slice needs at least two variables");
  if (k < 0 || k > f.degree()) throw UsageError("slice index out of range");
  const int last = f.num_vars() - 1;
  BasicForm<C> out(last, f.degree() - k);
  auto& dst = out.mutable_terms();
  for (const auto& t : f.terms())
    if (t.mono.exponent(last) == k) dst.push_back({t.mono.with_exponent(last, 0), t.coeff});
  // Dropping the last exponent keeps descending lex order.
  return out;
}

/// Restriction to the hyperplane X_{n} = 0 as a form in n variables
/// (the terms of slice 0, not re-indexed).
template <class C>
BasicForm<C> restrict_to_infinity(const BasicForm<C>& f) {
  BasicForm<C> out(f.num_vars(), f.degree());
  const int last = f.num_vars() - 1;
  auto& dst = out.mutable_terms();
  for (const auto& t : f.terms())
    if (t.mono.exponent(last) == 0) dst.push_back(t);
  return out;
}

/// Coefficient of X_{n}^{deg}, i.e. F(0, ..., 0, 1).
template <class C>
C top_coefficient(const BasicForm<C>& f) {
  return f.coeff(Monomial::variable_power(f.num_vars() - 1, f.degree()));
}

// ---------------------------------------------------------------------------
// Power map

template <class C>
BasicForm<C> power_pullback(const BasicForm<C>& f, int d) {
  if (d < 2) throw UsageError("power map degree must be >= 2");
  if (static_cast<long>(f.degree()) * d > kMaxExponent)
    throw UsageError("pull-back degree out of range");
  BasicForm<C> out(f.num_vars(), f.degree() * d);
  auto& dst = out.mutable_terms();
  dst.reserve(f.size());
  for (const auto& t : f.terms()) {
    Monomial m;
    for (int v = 0; v < f.num_vars(); ++v) m = m.with_exponent(v, t.mono.exponent(v) * d);
    dst.push_back({m, t.coeff});
  }
  return out;  // scaling exponents preserves order
}

namespace detail {

template <class C>
BasicForm<CyclotomicPoly<C>> twisted_copy(const BasicForm<C>& f, int var, int j, int d) {
  BasicForm<CyclotomicPoly<C>> out(f.num_vars(), f.degree());
  auto& dst = out.mutable_terms();
  dst.reserve(f.size());
  for (const auto& t : f.terms())
    dst.push_back({t.mono, CyclotomicPoly<C>::monomial(d, t.coeff, j * t.mono.exponent(var))});
  return out;
}

// Product over j of f(t^j X_var), projected to Q(zeta_d). The result is
// invariant under X_var -> zeta X_var, so only exponents divisible by d
// survive and every coefficient is rational.
template <class C>
BasicForm<C> norm_in_variable(const BasicForm<C>& f, int var, int d,
                              const std::vector<mpz_class>& phi) {
  auto acc = twisted_copy(f, var, 0, d);
  for (int j = 1; j < d; ++j) acc = acc * twisted_copy(f, var, j, d);

  BasicForm<C> out(f.num_vars(), acc.degree());
  auto& dst = out.mutable_terms();
  dst.reserve(acc.size());
  for (const auto& t : acc.terms()) {
    std::vector<C> r = reduce_mod_cyclotomic(t.coeff.coeffs(), phi);
    if constexpr (CoeffTraits<C>::exact) {
      for (std::size_t i = 1; i < r.size(); ++i)
        if (!CoeffTraits<C>::is_zero(r[i]))
          throw InternalError("roots-of-unity product has an irrational coefficient");
      if (CoeffTraits<C>::is_zero(r[0])) continue;
      if (t.mono.exponent(var) % d != 0)
        throw InternalError("roots-of-unity product has an exponent not divisible by d");
      dst.push_back({t.mono, std::move(r[0])});
    } else {
      // Inexact coefficients: the vanishing coordinates are rounding noise.
      if (t.mono.exponent(var) % d != 0 || CoeffTraits<C>::is_zero(r[0])) continue;
      dst.push_back({t.mono, std::move(r[0])});
    }
  }
  return out;
}

}  // namespace detail

/// The unique G with G(X_1^d, ..., X_n^d) = prod over zeta in mu_d^{n-1} of
/// F(zeta_1 X_1, ..., zeta_{n-1} X_{n-1}, X_n). deg G = d^{n-2} deg F.
template <class C>
BasicForm<C> power_pushforward(const BasicForm<C>& f, int d) {
  if (d < 2) throw UsageError("power map degree must be >= 2");
  if (f.is_zero()) throw UsageError("cannot push forward the zero form");
  const int n = f.num_vars();
  long full_degree = f.degree();
  for (int i = 0; i + 1 < n; ++i) full_degree *= d;
  if (full_degree > kMaxExponent) throw UsageError("push-forward degree out of range");

  const auto phi = cyclotomic_polynomial(d);
  BasicForm<C> cur = f;
  for (int var = 0; var + 1 < n; ++var) cur = detail::norm_in_variable(cur, var, d, phi);

  BasicForm<C> out(n, static_cast<int>(full_degree / d));
  auto& dst = out.mutable_terms();
  dst.reserve(cur.size());
  for (const auto& t : cur.terms()) {
    Monomial m;
    for (int v = 0; v < n; ++v) {
      const int e = t.mono.exponent(v);
      if (e % d != 0) {
        if constexpr (CoeffTraits<C>::exact)
          throw InternalError("push-forward exponent not divisible by d");
        else
          continue;
      }
      m = m.with_exponent(v, e / d);
    }
    dst.push_back({m, t.coeff});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linear substitution F(M X)

namespace detail {

template <class C>
class LinearSubstitution {
 public:
  LinearSubstitution(const Matrix<C>& m, int n) : n_(n) {
    for (int i = 0; i < n; ++i) rows_.push_back(BasicForm<C>::linear(m[static_cast<std::size_t>(i)]));
    powers_.resize(static_cast<std::size_t>(n));
  }

  BasicForm<C> apply(const BasicForm<C>& f) {
    if (f.is_zero()) return BasicForm<C>(n_, f.degree());
    return horner(f.terms(), 0, f.degree());
  }

 private:
  const BasicForm<C>& power(int var, int e) {
    auto& cache = powers_[static_cast<std::size_t>(var)];
    if (cache.empty()) cache.push_back(BasicForm<C>::constant(n_, CoeffTraits<C>::from_int(1)));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * rows_[static_cast<std::size_t>(var)]);
    return cache[static_cast<std::size_t>(e)];
  }

  // All terms share the exponents of variables < var; `deg` is what remains.
  BasicForm<C> horner(std::span<const Term<C>> terms, int var, int deg) {
    if (var == n_ - 1) {
      BasicForm<C> r = power(var, deg);
      r.scale(terms.front().coeff);
      return r;
    }
    const auto& row = rows_[static_cast<std::size_t>(var)];
    BasicForm<C> acc;
    bool have = false;
    int prev = 0;
    std::size_t i = 0;
    while (i < terms.size()) {
      const int a = terms[i].mono.exponent(var);
      std::size_t j = i;
      while (j < terms.size() && terms[j].mono.exponent(var) == a) ++j;
      BasicForm<C> sub = horner(terms.subspan(i, j - i), var + 1, deg - a);
      if (!have) {
        acc = std::move(sub);
        have = true;
      } else {
        for (int g = 0; g < prev - a; ++g) acc = acc * row;
        acc += sub;
      }
      prev = a;
      i = j;
    }
    for (int g = 0; g < prev; ++g) acc = acc * row;
    return acc;
  }

  int n_;
  std::vector<BasicForm<C>> rows_;
  std::vector<std::vector<BasicForm<C>>> powers_;
};

}  // namespace detail

/// F(M X) without any check on M beyond its shape.
template <class C>
BasicForm<C> substitute_linear(const BasicForm<C>& f, const Matrix<C>& m) {
  const auto n = static_cast<std::size_t>(f.num_vars());
  if (m.size() != n) throw UsageError("substitution matrix has wrong size");
  for (const auto& row : m)
    if (row.size() != n) throw UsageError("substitution matrix must be square");
  detail::LinearSubstitution<C> sub(m, f.num_vars());
  return sub.apply(f);
}

/// Exact F(M X) for an invertible rational matrix M.
Form compose_linear(const Form& f, const Matrix<mpq_class>& m);

// ---------------------------------------------------------------------------
// Helpers for exact forms

/// Gcd of the integer coefficients (0 for the zero form).
mpz_class content(const IntForm& f);

/// Primitive integer form with positive leading coefficient; also the
/// scalar s with result = s * f.
IntForm primitive_part(const Form& f, mpq_class* scale = nullptr);
IntForm primitive_part(const IntForm& f);

Form to_rational(const IntForm& f);

/// Max bit size over coefficients.
std::size_t max_coeff_bits(const IntForm& f);

std::string to_string(const Form& f);

}  // namespace relesc
