#pragma once

// Divisors on P^N given by a single form, the maps f = L o phi with
// L = [[A, b], [0, 1]], and the truncated relative escape rate.

#include <gmpxx.h>

#include <cstddef>
#include <optional>

#include "relesc/forms.hpp"
#include "relesc/matrix.hpp"
#include "relesc/places.hpp"

namespace relesc {

/// Effective divisor, stored as its canonical defining form: integer
/// coefficients with content 1 and positive leading coefficient.
class Divisor {
 public:
  static Divisor from_form(const Form& f);
  static Divisor from_form(const IntForm& f);
  /// The point [z] on P^1, i.e. X1 - z X2 = 0.
  static Divisor point(const mpq_class& z);
  /// The hyperplane at infinity X_{N+1} = 0.
  static Divisor at_infinity(int N);

  const IntForm& form() const { return form_; }
  Form rational_form() const { return to_rational(form_); }
  int degree() const { return form_.degree(); }
  int num_vars() const { return form_.num_vars(); }
  int N() const { return form_.num_vars() - 1; }

  bool contains_infinity() const;  // H is a component
  bool contains_origin() const;    // passes through (0, ..., 0, 1)

  /// D + E, defined by the product of forms.
  friend Divisor operator+(const Divisor& a, const Divisor& b);
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.form_ == b.form_; }

 private:
  explicit Divisor(IntForm f) : form_(std::move(f)) {}
  IntForm form_;
};

/// f(X) = A X^d + b with A in SL_N(Q).
struct MinCritMap {
  int N = 1;
  int d = 2;
  QMatrix A;
  QVector b;
  QMatrix L;
  QMatrix L_inv;
  QMatrix A_inv;

  static MinCritMap make(int d, QMatrix A, QVector b);
  /// z -> z^d + c.
  static MinCritMap unicritical(int d, const mpq_class& c);

  /// Integer multiples of L and L^-1 (same maps on P^N).
  Matrix<mpz_class> L_int() const;
  Matrix<mpz_class> L_inv_int() const;
};

LocalLog lambda_local(const Divisor& D, Place v);
/// DomainError if D contains H or the origin.
LocalLog mu_local(const Divisor& D, Place v);

Divisor pushforward_map(const MinCritMap& f, const Divisor& D);
Divisor pullback_map(const MinCritMap& f, const Divisor& D);
Divisor pullback_translation(const QVector& c, const Divisor& D);
Divisor pushforward_power(const Divisor& D, int d);
Divisor pullback_power(const Divisor& D, int d);
/// L_* D = (L^-1)^* D and L^* D for the map's linear part.
Divisor pushforward_linear(const MinCritMap& f, const Divisor& D);
Divisor pullback_linear(const MinCritMap& f, const Divisor& D);
Divisor critical_divisor(const MinCritMap& f);

struct Estimate {
  LocalLog value;
  LocalLog error;
  int k = 0;
  Place place = Place::infinity();
};

enum class DeltaMode { Auto, Exact, Scaled };

inline constexpr std::size_t kDefaultBitBudget = std::size_t{1} << 20;

/// f_*^k D, exactly. BudgetExceeded if a coefficient outgrows `bit_budget`.
Divisor pushforward_iterate(const MinCritMap& f, const Divisor& D, int k,
                            std::size_t bit_budget = kDefaultBitBudget);

/// Certified radius for |Delta_f(D) - lambda(f_*^k D)/d^{kN}| at v.
LocalLog delta_tail(const MinCritMap& f, int degree, int k, Place v);

/// lambda_v(f_*^k D)/d^{kN} with its certified tail. Auto picks exact
/// p-adically and scaled at infinity.
Estimate delta_estimate(const MinCritMap& f, const Divisor& D, int k, Place v,
                        DeltaMode mode = DeltaMode::Auto,
                        std::size_t bit_budget = kDefaultBitBudget);

/// Delta_f(C_f), evaluated through the hyperplanes B_i = L_* H_i:
/// f_* H_i = d^{N-1} B_i, so Delta(C_f) = (d-1)/d * sum_i Delta(B_i).
Estimate delta_relative_critical(const MinCritMap& f, int k, Place v,
                                 DeltaMode mode = DeltaMode::Auto,
                                 std::size_t bit_budget = kDefaultBitBudget);

/// The hyperplane B_i defined by row i of L^-1.
Divisor branch_hyperplane(const MinCritMap& f, int i);

}  // namespace relesc
