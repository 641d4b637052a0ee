#pragma once

// Independent reference implementations used by the tests. Nothing here
// calls into the library's product or push-forward code.

#include <gmpxx.h>

#include <map>
#include <random>
#include <vector>

#include "relesc/forms.hpp"

namespace oracle {

// a + b*w with w^2 = -1 - w, i.e. w a primitive cube root of unity.
struct QOmega {
  mpq_class a = 0, b = 0;
  QOmega() = default;
  QOmega(mpq_class x, mpq_class y = 0) : a(std::move(x)), b(std::move(y)) {}
  friend QOmega operator+(const QOmega& x, const QOmega& y) { return {x.a + y.a, x.b + y.b}; }
  friend QOmega operator*(const QOmega& x, const QOmega& y) {
    // (a+bw)(c+ew) = ac + (ae+bc)w + be w^2 = (ac-be) + (ae+bc-be)w
    mpq_class be = x.b * y.b;
    return {x.a * y.a - be, x.a * y.b + x.b * y.a - be};
  }
  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
};

template <class K>
using Dense = std::map<std::vector<int>, K>;

template <class K>
Dense<K> naive_mul(const Dense<K>& x, const Dense<K>& y) {
  Dense<K> out;
  for (const auto& [ex, cx] : x)
    for (const auto& [ey, cy] : y) {
      std::vector<int> e(ex.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ex[i] + ey[i];
      out[e] = out[e] + cx * cy;
    }
  return out;
}

inline Dense<mpq_class> to_dense(const relesc::Form& f) {
  Dense<mpq_class> out;
  for (const auto& t : f.terms()) out[t.mono.exponents(f.num_vars())] = t.coeff;
  return out;
}

inline relesc::Form from_dense(int nvars, int degree, const Dense<mpq_class>& m) {
  std::vector<std::pair<std::vector<int>, mpq_class>> terms(m.begin(), m.end());
  return relesc::Form::from_terms(nvars, degree, terms);
}

inline QOmega root_power(int d, int j) {
  // d = 2: (-1)^j; d = 3: w^j
  j %= d;
  if (d == 2) return QOmega(j == 0 ? 1 : -1);
  if (j == 0) return QOmega(1);
  if (j == 1) return QOmega(0, 1);
  return QOmega(-1, -1);
}

/// prod over zeta in mu_d^{n-1} of F(zeta_1 X_1, ..., X_n), for d in {2,3},
/// by brute-force expansion in Q(w).
inline relesc::Form twist_product(const relesc::Form& f, int d) {
  if (d != 2 && d != 3) throw std::invalid_argument("oracle supports d = 2, 3");
  const int n = f.num_vars();
  int count = 1;
  for (int i = 0; i + 1 < n; ++i) count *= d;
  Dense<QOmega> acc;
  acc[std::vector<int>(static_cast<std::size_t>(n), 0)] = QOmega(1);
  for (int idx = 0; idx < count; ++idx) {
    std::vector<int> js(static_cast<std::size_t>(n), 0);
    int r = idx;
    for (int i = 0; i + 1 < n; ++i) {
      js[static_cast<std::size_t>(i)] = r % d;
      r /= d;
    }
    Dense<QOmega> twisted;
    for (const auto& t : f.terms()) {
      auto e = t.mono.exponents(n);
      QOmega c(t.coeff);
      for (int i = 0; i + 1 < n; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) c = c * root_power(d, js[static_cast<std::size_t>(i)]);
      twisted[e] = c;
    }
    acc = naive_mul(acc, twisted);
  }
  Dense<mpq_class> out;
  for (const auto& [e, c] : acc) {
    if (sgn(c.b) != 0) throw std::logic_error("twist product not rational");
    if (sgn(c.a) != 0) out[e] = c.a;
  }
  return from_dense(n, f.degree() * count, out);
}

/// Random form with integer coefficients in [-bound, bound], at least one
/// nonzero coefficient.
template <class Rng>
relesc::Form random_form(Rng& rng, int nvars, int degree, long bound, double density = 0.7) {
  std::vector<std::pair<std::vector<int>, mpq_class>> terms;
  std::vector<int> e(static_cast<std::size_t>(nvars));
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == nvars - 1) {
      e[static_cast<std::size_t>(var)] = left;
      if (static_cast<double>(rng() % 1000) / 1000.0 < density) {
        long c = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
        terms.emplace_back(e, mpq_class(c));
      }
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[static_cast<std::size_t>(var)] = a;
      self(self, var + 1, left - a);
    }
  };
  for (;;) {
    terms.clear();
    rec(rec, 0, degree);
    auto f = relesc::Form::from_terms(nvars, degree, terms);
    if (!f.is_zero()) return f;
  }
}

/// Equality of forms up to a nonzero rational scalar.
inline bool proportional(const relesc::Form& a, const relesc::Form& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return relesc::primitive_part(a) == relesc::primitive_part(b);
}

}  // namespace oracle
