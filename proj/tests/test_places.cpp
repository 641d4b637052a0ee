#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "relesc/places.hpp"
#include "relesc/primes.hpp"

using namespace relesc;
namespace mp = boost::multiprecision;

namespace {

const Place inf = Place::infinity();

bool close(const Real& a, const Real& b) { return mp::abs(a - b) < Real("1e-40"); }

QMatrix random_sl2(std::mt19937_64& rng, int steps) {
  QMatrix m = identity_matrix(2);
  for (int s = 0; s < steps; ++s) {
    QMatrix e = identity_matrix(2);
    const long k = static_cast<long>(rng() % 7) - 3;
    if (s % 2 == 0) e[0][1] = k;
    else e[1][0] = k;
    m = matmul(m, e);
  }
  return m;
}

}  // namespace

TEST_CASE("log_abs") {
  CHECK(close(log_abs(mpq_class(3, 2), inf).to_real(), mp::log(Real(3) / 2)));
  CHECK(log_abs(mpq_class(3, 2), Place::prime(2)).log_p_multiple() == 1);
  CHECK(log_abs(mpq_class(0), inf).is_neg_inf());
  CHECK(log_abs(mpq_class(0), Place::prime(5)).is_neg_inf());
}

TEST_CASE("log_plus_int") {
  CHECK(close(log_plus_int(2, inf).to_real(), real_log2()));
  CHECK(log_plus_int(2, Place::prime(3)) == LocalLog::zero(Place::prime(3)));
  CHECK(log_plus_int(factorial(5), Place::prime(7)) == LocalLog::zero(Place::prime(7)));
  CHECK(log_plus_int(factorial(5), Place::prime(2)) == LocalLog::zero(Place::prime(2)));
}

TEST_CASE("infinity conventions and mixed places") {
  LocalLog a = LocalLog::arch(Real(3));
  CHECK((a + LocalLog::pos_inf(inf)).is_pos_inf());
  CHECK(LocalLog::neg_inf(inf) < a);
  CHECK_THROWS_AS(a + LocalLog::padic(2, 1), UsageError);
  CHECK_THROWS_AS(LocalLog::padic(3, 1) + LocalLog::padic(2, 1), UsageError);
}

TEST_CASE("gauss norms") {
  Form f = Form::from_terms(2, 1, {{{1, 0}, 1}, {{0, 1}, -3}});
  CHECK(close(gauss_norm_log(f, inf).to_real(), mp::log(Real(3))));
  Form g = Form::from_terms(2, 2, {{{2, 0}, 2}, {{0, 2}, 4}});
  CHECK(gauss_norm_log(g, Place::prime(2)).log_p_multiple() == -1);
  CHECK(gauss_norm_log(Form(2, 3), inf).is_neg_inf());
}

TEST_CASE("Gauss lemma at finite places") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Form f = oracle::random_form(rng, 3, 2, 50);
    Form g = oracle::random_form(rng, 3, 3, 50);
    for (long p : {2L, 3L, 5L}) {
      const Place v = Place::prime(p);
      CHECK(gauss_norm_log(f * g, v) == gauss_norm_log(f, v) + gauss_norm_log(g, v));
    }
  }
}

TEST_CASE("product formula") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    mpq_class x(static_cast<long>(rng() % 100000) + 1, static_cast<long>(rng() % 100000) + 1);
    x.canonicalize();
    Real sum = log_abs(x, inf).to_real();
    mpz_class both = x.get_num() * x.get_den();
    for (const auto& p : prime_factors(both)) sum += log_abs(x, Place::prime(p.get_si())).to_real();
    CHECK(mp::abs(sum) < Real("1e-40"));
  }
}

TEST_CASE("matrix functionals") {
  const QMatrix id = identity_matrix(2);
  CHECK(close(matrix_lambda(id, inf).to_real(), real_log2()));
  CHECK(matrix_lambda(id, Place::prime(5)) == LocalLog::zero(Place::prime(5)));
  CHECK(close(matrix_xi(id, inf).to_real(), real_log2()));
  QMatrix diag = {{2, 0}, {0, mpq_class(1, 2)}};
  CHECK(matrix_xi(diag, Place::prime(2)).log_p_multiple() == 2);
  QMatrix bad = {{2, 0}, {0, 1}};
  CHECK_THROWS_AS(matrix_lambda(bad, inf), UsageError);
  CHECK_THROWS_AS(matrix_xi(bad, inf), UsageError);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    QMatrix a = random_sl2(rng, 4);
    const LocalLog la = matrix_lambda(a, inf);
    CHECK(LocalLog::le_with_slack(matrix_lambda(inverse(a), inf), la));
    CHECK(LocalLog::le_with_slack(matrix_xi(a, inf), la + log_plus_int(2, inf)));
    CHECK(la >= LocalLog::zero(inf));
  }
}

TEST_CASE("place constants") {
  {
    const auto c = place_constants(2, 2, Place::prime(7));
    const LocalLog z = LocalLog::zero(Place::prime(7));
    for (const auto& x : {c.c1, c.c2, c.c3, c.c4, c.c5, c.c8, c.c9}) CHECK(x == z);
  }
  {
    const auto c = place_constants(1, 2, inf);
    const Real l2 = real_log2();
    CHECK(close(c.c1.to_real(), l2));
    CHECK(close(c.c2.to_real(), mp::log(Real(8))));
    CHECK(close(c.c3.to_real(), 3 * l2));
    CHECK(c.c4.to_real() == 0);
    CHECK(close(c.c5.to_real(), l2));
    CHECK(c.c8.to_real() == 0);
  }
  {
    const auto c = place_constants(1, 2, Place::prime(2));
    CHECK(c.c3.log_p_multiple() == 1);
    CHECK(c.c4.log_p_multiple() == 1);
    CHECK(c.c9.log_p_multiple() == 1);  // c3/(d-1)
  }
  for (int N : {1, 2, 3})
    for (int d : {2, 3, 5})
      for (const Place v : {inf, Place::prime(2), Place::prime(3), Place::prime(11)}) {
        const auto c = place_constants(N, d, v);
        const LocalLog z = LocalLog::zero(v);
        for (const auto& x : {c.c1, c.c2, c.c3, c.c4, c.c5, c.c8, c.c9}) CHECK(x >= z);
      }
}

TEST_CASE("prime factorization") {
  CHECK(prime_factors(mpz_class(360)) == std::vector<mpz_class>{2, 3, 5});
  mpz_class big = mpz_class("1000000007") * mpz_class("998244353");
  CHECK(prime_factors(big) == std::vector<mpz_class>{mpz_class("998244353"), mpz_class("1000000007")});
}
