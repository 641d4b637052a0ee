#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <type_traits>
#include <vector>

#include "relesc/coeff.hpp"
#include "relesc/errors.hpp"

namespace relesc {

/// Element of C[t]/(t^d - 1), stored as its d coordinates in the basis
/// 1, t, ..., t^{d-1}. Used as the carrier for products of a form twisted
/// by roots of unity.
template <class C>
class CyclotomicPoly {
 public:
  CyclotomicPoly() = default;
  explicit CyclotomicPoly(int d) : coeffs_(static_cast<std::size_t>(d)) {}

  static CyclotomicPoly monomial(int d, const C& c, int power) {
    CyclotomicPoly r(d);
    r.coeffs_[static_cast<std::size_t>(((power % d) + d) % d)] = c;
    return r;
  }

  int modulus_degree() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<C>& coeffs() const { return coeffs_; }
  std::vector<C>& coeffs() { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!CoeffTraits<C>::is_zero(c)) return false;
    return true;
  }

  CyclotomicPoly& operator+=(const CyclotomicPoly& o) {
    if (coeffs_.empty()) {
      coeffs_ = o.coeffs_;
      return *this;
    }
    if (o.coeffs_.empty()) return *this;
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }

  // acc += a*b, exponents reduced mod d; zero coordinates are skipped since
  // twisted copies of a rational form only have one nonzero coordinate.
  static void fma(CyclotomicPoly& acc, const CyclotomicPoly& a, const CyclotomicPoly& b) {
    const std::size_t d = a.coeffs_.size();
    if (b.coeffs_.size() != d) throw InternalError("cyclotomic modulus mismatch");
    if (acc.coeffs_.empty()) acc.coeffs_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (CoeffTraits<C>::is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (CoeffTraits<C>::is_zero(b.coeffs_[j])) continue;
        CoeffTraits<C>::fma(acc.coeffs_[(i + j) % d], a.coeffs_[i], b.coeffs_[j]);
      }
    }
  }

  friend CyclotomicPoly operator*(const CyclotomicPoly& a, const CyclotomicPoly& b) {
    CyclotomicPoly r(a.modulus_degree());
    fma(r, a, b);
    return r;
  }

  friend bool operator==(const CyclotomicPoly& a, const CyclotomicPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void check_same(const CyclotomicPoly& o) const {
    if (o.coeffs_.size() != coeffs_.size())
      throw InternalError("cyclotomic modulus mismatch");
  }

  std::vector<C> coeffs_;
};

/// Integer coefficients of the d-th cyclotomic polynomial, lowest degree
/// first (monic).
std::vector<mpz_class> cyclotomic_polynomial(int d);

/// Remainder of `v` (coordinates in 1, t, ..., t^{d-1}) modulo Phi_d(t);
/// the result has phi(d) coordinates. This is the image of v under
/// t -> primitive d-th root of unity.
template <class C>
std::vector<C> reduce_mod_cyclotomic(std::vector<C> v, const std::vector<mpz_class>& phi) {
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = v.size(); i-- > deg;) {
    if (CoeffTraits<C>::is_zero(v[i])) continue;
    const C q = v[i];
    for (std::size_t j = 0; j <= deg; ++j) {
      if (sgn(phi[j]) == 0) continue;
      if constexpr (std::is_same_v<C, Real>) {
        v[i - deg + j] -= q * to_real(phi[j]);
      } else {
        v[i - deg + j] -= q * C(phi[j]);
      }
    }
  }
  v.resize(deg);
  return v;
}

template <class C>
struct CoeffTraits<CyclotomicPoly<C>> {
  static constexpr bool exact = CoeffTraits<C>::exact;
  static bool is_zero(const CyclotomicPoly<C>& x) { return x.is_zero(); }
  static void fma(CyclotomicPoly<C>& acc, const CyclotomicPoly<C>& a,
                  const CyclotomicPoly<C>& b) {
    CyclotomicPoly<C>::fma(acc, a, b);
  }
};

}  // namespace relesc
