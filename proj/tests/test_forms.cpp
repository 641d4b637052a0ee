#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "relesc/forms.hpp"
#include "relesc/matrix.hpp"

using namespace relesc;

namespace {

Form lin2(mpq_class a, mpq_class b) {
  return Form::from_terms(2, 1, {{{1, 0}, a}, {{0, 1}, b}});
}

}  // namespace

TEST_CASE("difference of squares") {
  const mpq_class a(7, 3);
  Form p = lin2(1, -a) * lin2(1, a);
  Form expect = Form::from_terms(2, 2, {{{2, 0}, 1}, {{0, 2}, -a * a}});
  CHECK(p == expect);
}

TEST_CASE("unit form is the identity for products") {
  std::mt19937_64 rng(3);
  Form f = oracle::random_form(rng, 3, 3, 9);
  CHECK(f * Form::constant(3, 1) == f);
}

TEST_CASE("product against naive expansion") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Form> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(oracle::random_form(rng, 3, 2, 9));
    Form got = form_product<mpq_class>(fs);
    auto dense = oracle::naive_mul(oracle::naive_mul(oracle::to_dense(fs[0]), oracle::to_dense(fs[1])),
                                   oracle::to_dense(fs[2]));
    CHECK(got == oracle::from_dense(3, 6, dense));
    // commutativity
    CHECK(fs[0] * fs[1] == fs[1] * fs[0]);
  }
}

TEST_CASE("mismatched arity is a usage error") {
  CHECK_THROWS_AS(lin2(1, 1) * Form::constant(3, 1), UsageError);
  CHECK_THROWS_AS(Form::from_terms(2, 2, {{{1, 0}, 1}}), UsageError);
}

TEST_CASE("compose_linear") {
  Form x1 = lin2(1, 0);
  CHECK(compose_linear(x1, identity_matrix(2)) == x1);

  const mpq_class b(5, 2);
  QMatrix m = {{1, b}, {0, 1}};
  CHECK(compose_linear(lin2(1, -3), m) == lin2(1, b - 3));

  QMatrix singular = {{1, 2}, {2, 4}};
  CHECK_THROWS_AS(compose_linear(x1, singular), UsageError);
}

TEST_CASE("compose_linear round trip through the inverse") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Form f = oracle::random_form(rng, 3, 3, 9);
    // unimodular: product of elementary matrices
    QMatrix m = identity_matrix(3);
    for (int s = 0; s < 4; ++s) {
      QMatrix e = identity_matrix(3);
      int i = static_cast<int>(rng() % 3), j = static_cast<int>(rng() % 3);
      if (i == j) continue;
      e[i][j] = static_cast<long>(rng() % 7) - 3;
      m = matmul(m, e);
    }
    CHECK(compose_linear(compose_linear(f, m), inverse(m)) == f);
  }
}

TEST_CASE("power_pullback") {
  const mpq_class a(-4, 9);
  Form f = lin2(1, -a);
  CHECK(power_pullback(f, 2) == Form::from_terms(2, 2, {{{2, 0}, 1}, {{0, 2}, -a}}));
  Form mono = Form::from_terms(2, 3, {{{3, 0}, 5}});
  CHECK(power_pullback(mono, 4) == Form::from_terms(2, 12, {{{12, 0}, 5}}));
}

TEST_CASE("power_pushforward on a point") {
  const mpq_class a(-4, 9);
  CHECK(oracle::proportional(power_pushforward(lin2(1, -a), 2), lin2(1, -a * a)));
  CHECK(oracle::proportional(power_pushforward(lin2(1, -a), 3), lin2(1, -a * a * a)));
}

TEST_CASE("power_pushforward of the critical monomial") {
  for (int d : {2, 3}) {
    for (int n : {2, 3}) {  // number of variables = N + 1
      const int N = n - 1;
      std::vector<int> e(static_cast<std::size_t>(n), d - 1);
      e.back() = 0;
      Form f = Form::monomial(n, e, 1);
      Form g = power_pushforward(f, d);
      int power = d - 1;
      for (int i = 0; i + 1 < N; ++i) power *= d;
      std::vector<int> ge(static_cast<std::size_t>(n), power);
      ge.back() = 0;
      CHECK(oracle::proportional(g, Form::monomial(n, ge, 1)));
      CHECK(oracle::proportional(power_pullback(g, d), oracle::twist_product(f, d)));
    }
  }
}

TEST_CASE("pull-back of push-forward equals the twist product") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int d = 2 + static_cast<int>(rng() % 2);
    const int deg = 1 + static_cast<int>(rng() % 3);
    Form f = oracle::random_form(rng, n, deg, 9);
    Form g = power_pushforward(f, d);
    int scale = 1;
    for (int i = 0; i + 1 < n - 1; ++i) scale *= d;
    CHECK(g.degree() == scale * deg);
    CHECK(oracle::proportional(power_pullback(g, d), oracle::twist_product(f, d)));
  }
}

TEST_CASE("push-forward of a pull-back is a power") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int d = 2 + static_cast<int>(rng() % 2);
    Form f = oracle::random_form(rng, n, 1 + static_cast<int>(rng() % 2), 5);
    int count = 1;
    for (int i = 0; i + 1 < n; ++i) count *= d;
    std::vector<Form> copies(static_cast<std::size_t>(count), f);
    CHECK(oracle::proportional(power_pushforward(power_pullback(f, d), d), form_product<mpq_class>(copies)));
  }
}

TEST_CASE("slices") {
  Form f = lin2(1, -3);
  CHECK(slice(f, 0) == Form::from_terms(1, 1, {{{1}, 1}}));
  CHECK(slice(f, 1) == Form::constant(1, -3));

  Form g = Form::from_terms(3, 2, {{{1, 1, 0}, 1}, {{0, 0, 2}, 1}});
  CHECK(slice(g, 2) == Form::constant(2, 1));
  CHECK(slice(g, 1).is_zero());
  CHECK(slice(g, 0) == Form::from_terms(2, 2, {{{1, 1}, 1}}));
  CHECK_THROWS_AS(slice(g, 3), UsageError);
}

TEST_CASE("slices reassemble the form") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    Form f = oracle::random_form(rng, 3, 4, 9);
    Form sum(3, 4);
    for (int k = 0; k <= 4; ++k) {
      Form s = slice(f, k);
      // lift back to three variables and multiply by X3^k
      Form lifted(3, s.degree());
      for (const auto& t : s.terms())
        lifted += Form::from_terms(3, s.degree(), {{{t.mono.exponent(0), t.mono.exponent(1), 0}, t.coeff}});
      std::vector<int> xe = {0, 0, k};
      sum += lifted * Form::monomial(3, xe, 1);
    }
    CHECK(sum == f);
  }
}

TEST_CASE("primitive part") {
  Form f = Form::from_terms(2, 1, {{{1, 0}, mpq_class(-2, 3)}, {{0, 1}, mpq_class(4, 9)}});
  mpq_class s;
  IntForm p = primitive_part(f, &s);
  CHECK(p.coeff({1, 0}) == 3);
  CHECK(p.coeff({0, 1}) == -2);
  CHECK(s == mpq_class(-9, 2));
}
