#include "relesc/forms.hpp"

#include <sstream>

#include "relesc/matrix.hpp"

namespace relesc {

Form compose_linear(const Form& f, const Matrix<mpq_class>& m) {
  if (!is_square(m, f.num_vars())) throw UsageError("substitution matrix has wrong size");
  if (sgn(determinant(m)) == 0) throw UsageError("substitution matrix is singular");
  return substitute_linear(f, m);
}

mpz_class content(const IntForm& f) {
  mpz_class g = 0;
  for (const auto& t : f.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntForm primitive_part(const IntForm& f) {
  if (f.is_zero()) throw UsageError("the zero form has no primitive part");
  mpz_class g = content(f);
  if (sgn(f.terms().front().coeff) < 0) g = -g;
  return f.map_coeffs<mpz_class>([&](const mpz_class& c) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return q;
  });
}

IntForm primitive_part(const Form& f, mpq_class* scale) {
  if (f.is_zero()) throw UsageError("the zero form has no primitive part");
  // Clear denominators, then divide by the content.
  mpz_class l = 1;
  for (const auto& t : f.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  IntForm ints = f.map_coeffs<mpz_class>([&](const mpq_class& c) {
    mpz_class v;
    mpz_divexact(v.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    return mpz_class(v * c.get_num());
  });
  mpz_class g = content(ints);
  if (sgn(ints.terms().front().coeff) < 0) g = -g;
  if (scale) {
    *scale = mpq_class(l, g);
    scale->canonicalize();
  }
  return primitive_part(ints);
}

Form to_rational(const IntForm& f) {
  return f.map_coeffs<mpq_class>([](const mpz_class& c) { return mpq_class(c); });
}

std::size_t max_coeff_bits(const IntForm& f) {
  std::size_t b = 0;
  for (const auto& t : f.terms()) b = std::max(b, mpz_sizeinbase(t.coeff.get_mpz_t(), 2));
  return b;
}

std::string to_string(const Form& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    const mpq_class& c = t.coeff;
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    mpq_class a = abs(c);
    bool any = false;
    for (int v = 0; v < f.num_vars(); ++v) any = any || t.mono.exponent(v) > 0;
    if (a != 1 || !any) os << a.get_str() << (any ? "*" : "");
    bool sep = false;
    for (int v = 0; v < f.num_vars(); ++v) {
      const int e = t.mono.exponent(v);
      if (e == 0) continue;
      if (sep) os << "*";
      os << "X" << (v + 1);
      if (e > 1) os << "^" << e;
      sep = true;
    }
  }
  return os.str();
}

}  // namespace relesc
