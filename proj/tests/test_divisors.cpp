#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "relesc/divisors.hpp"

using namespace relesc;
namespace mp = boost::multiprecision;

namespace {

const Place inf = Place::infinity();

Divisor div_of(int nvars, int deg, std::vector<std::pair<std::vector<int>, mpq_class>> terms) {
  return Divisor::from_form(Form::from_terms(nvars, deg, terms));
}

// Exact integer/rational orbit of 0 under z^2 + c; returns log+|z_k| / 2^k.
Real orbit_rate(const mpq_class& c, int k) {
  mpq_class z = 0;
  for (int i = 0; i < k; ++i) z = z * z + c;
  Real l = log_of(z);
  if (l < 0) l = 0;
  return l / mp::pow(Real(2), k);
}

bool within(const Estimate& e, const Real& truth) {
  return mp::abs(e.value.to_real() - truth) <= e.error.to_real() + real_slack();
}

}  // namespace

TEST_CASE("lambda") {
  CHECK(mp::abs(lambda_local(Divisor::point(3), inf).to_real() - mp::log(Real(3))) < Real("1e-40"));
  CHECK(lambda_local(Divisor::point(mpq_class(1, 4)), Place::prime(2)).log_p_multiple() == 2);
  const MinCritMap f = MinCritMap::make(3, {{2, 1}, {1, 1}}, {5, mpq_class(1, 3)});
  const Divisor cf = critical_divisor(f);
  for (const Place v : {inf, Place::prime(2), Place::prime(3), Place::prime(5)})
    CHECK(lambda_local(cf, v) == LocalLog::zero(v));
  CHECK(lambda_local(Divisor::at_infinity(2), inf).is_pos_inf());
}

TEST_CASE("mu") {
  CHECK(mp::abs(mu_local(Divisor::point(3), inf).to_real() - mp::log(Real(3))) < Real("1e-40"));
  const Divisor q = div_of(2, 2, {{{2, 0}, 1}, {{1, 1}, 5}, {{0, 2}, 1}});
  CHECK(mp::abs(mu_local(q, inf).to_real() + mp::log(Real(5))) < Real("1e-40"));
  CHECK_THROWS_AS(mu_local(Divisor::at_infinity(1), inf), DomainError);
  CHECK_THROWS_AS(mu_local(Divisor::point(0), inf), DomainError);

  std::mt19937_64 rng(31);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Divisor D = Divisor::from_form(oracle::random_form(rng, 3, 1 + static_cast<int>(rng() % 3), 20));
    if (D.contains_infinity() || D.contains_origin()) continue;
    for (const Place v : {inf, Place::prime(2), Place::prime(3)}) {
      const LocalLog bound = mpq_class(1, D.degree()) * lambda_local(D, v);
      CHECK(LocalLog::le_with_slack(mu_local(D, v), bound));
    }
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("push-forward and pull-back by maps") {
  const mpq_class c(-7, 5);
  const MinCritMap f = MinCritMap::unicritical(2, c);
  CHECK(pushforward_map(f, Divisor::point(0)) == Divisor::point(c));
  const MinCritMap sq = MinCritMap::unicritical(2, 0);
  CHECK(pushforward_map(sq, Divisor::point(mpq_class(2, 3))) == Divisor::point(mpq_class(4, 9)));
  CHECK(pullback_map(f, Divisor::point(c)) == div_of(2, 2, {{{2, 0}, 1}}));

  const MinCritMap id2 = MinCritMap::make(2, {{1, 0}, {0, 1}}, {0, 0});
  const Divisor line = div_of(3, 1, {{{1, 0, 0}, 1}, {{0, 1, 0}, -1}});
  // the fixed line, covered twice
  CHECK(pushforward_map(id2, line) == line + line);
  const Divisor x1 = div_of(3, 1, {{{1, 0, 0}, 1}});
  CHECK(pullback_map(id2, x1) == div_of(3, 2, {{{2, 0, 0}, 1}}));
}

TEST_CASE("push-forward of pull-back is d^N D") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const int N = 1 + static_cast<int>(rng() % 2);
    const int d = 2 + static_cast<int>(rng() % 2);
    QMatrix A = identity_matrix(N);
    if (N == 2) A = {{1, static_cast<long>(rng() % 5) - 2}, {0, 1}};
    QVector b;
    for (int i = 0; i < N; ++i) b.emplace_back(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
    for (auto& x : b) x.canonicalize();
    const MinCritMap f = MinCritMap::make(d, A, b);
    const Divisor D = Divisor::from_form(oracle::random_form(rng, N + 1, 1, 6));
    const Divisor back = pushforward_map(f, pullback_map(f, D));
    int count = 1;
    for (int i = 0; i < N; ++i) count *= d;
    CHECK(back.degree() == count * D.degree());
    Divisor power = D;
    for (int i = 1; i < count; ++i) power = power + D;
    CHECK(back == power);
  }
}

TEST_CASE("translations") {
  CHECK(pullback_translation({5}, Divisor::point(3)) == Divisor::point(-2));
  const Divisor D = div_of(3, 2, {{{2, 0, 0}, 3}, {{0, 1, 1}, -2}, {{0, 0, 2}, 7}});
  CHECK(pullback_translation({0, 0}, D) == D);
}

TEST_CASE("critical divisor") {
  const MinCritMap f = MinCritMap::make(2, {{1, 0}, {0, 1}}, {5, 7});
  CHECK(critical_divisor(f) == div_of(3, 2, {{{1, 1, 0}, 1}}));
  CHECK(critical_divisor(MinCritMap::unicritical(3, 1)) == div_of(2, 2, {{{2, 0}, 1}}));
}

TEST_CASE("escape rate anchors") {
  // Frozen from an independent orbit oracle (exact rational orbit, then log).
  const Real z2p3("0.62381274988596298046953528485132");
  const Real z2p1("0.20367726136974000143661899538");
  {
    const Estimate e = delta_estimate(MinCritMap::unicritical(2, 3), Divisor::point(0), 20, inf);
    CHECK(mp::abs(e.value.to_real() - z2p3) < Real("1e-12"));
    CHECK(mp::abs(e.value.to_real() - orbit_rate(3, 20)) < Real("1e-40"));
    CHECK(within(e, z2p3));
  }
  {
    const Estimate e = delta_estimate(MinCritMap::unicritical(2, 1), Divisor::point(0), 20, inf);
    CHECK(mp::abs(e.value.to_real() - z2p1) < Real("1e-12"));
  }
  {
    const Estimate e = delta_estimate(MinCritMap::unicritical(2, -1), Divisor::point(0), 30, inf);
    CHECK(mp::abs(e.value.to_real()) <= Real("1e-6"));
  }
  {
    const Estimate e = delta_estimate(MinCritMap::unicritical(2, mpq_class(1, 2)), Divisor::point(0), 8,
                                      Place::prime(2));
    CHECK(e.value.log_p_multiple() == mpq_class(1, 2));
    CHECK(e.error.log_p_multiple() >= 0);
  }
  {
    // good reduction place: exactly zero
    const Estimate e = delta_estimate(MinCritMap::unicritical(2, 3), Divisor::point(0), 6, Place::prime(5));
    CHECK(e.value.log_p_multiple() == 0);
  }
  CHECK_THROWS_AS(delta_estimate(MinCritMap::unicritical(2, 3), Divisor::at_infinity(1), 5, inf), DomainError);
  CHECK_THROWS_AS(delta_estimate(MinCritMap::unicritical(2, 3), Divisor::point(0), 5, Place::prime(2),
                                 DeltaMode::Scaled),
                  UsageError);
}

TEST_CASE("bit budget") {
  CHECK_THROWS_AS(pushforward_iterate(MinCritMap::unicritical(2, 3), Divisor::point(0), 12, 1000), BudgetExceeded);
}

TEST_CASE("scaled and exact modes agree") {
  const std::vector<MinCritMap> maps = {
      MinCritMap::unicritical(2, 3), MinCritMap::unicritical(3, mpq_class(-5, 4)),
      MinCritMap::make(2, {{1, 1}, {0, 1}}, {2, mpq_class(-1, 3)}),
      MinCritMap::make(3, {{2, 1}, {1, 1}}, {1, 1})};
  for (const auto& f : maps) {
    const int k = f.N == 1 ? 8 : 3;
    Divisor D = f.N == 1 ? Divisor::point(mpq_class(1, 2))
                         : div_of(3, 1, {{{1, 0, 0}, 2}, {{0, 1, 0}, -1}, {{0, 0, 1}, 3}});
    const Estimate ex = delta_estimate(f, D, k, inf, DeltaMode::Exact);
    const Estimate sc = delta_estimate(f, D, k, inf, DeltaMode::Scaled);
    CHECK(mp::abs(ex.value.to_real() - sc.value.to_real()) < Real("1e-9"));
    CHECK(ex.error == sc.error);
  }
}

TEST_CASE("Delta laws within certified errors") {
  const MinCritMap f = MinCritMap::make(2, {{1, 1}, {0, 1}}, {mpq_class(3, 2), -2});
  const Divisor D = div_of(3, 1, {{{1, 0, 0}, 1}, {{0, 1, 0}, 2}, {{0, 0, 1}, -1}});
  const Divisor E = div_of(3, 1, {{{1, 0, 0}, 3}, {{0, 0, 1}, 5}});
  const int k = 4;
  auto est = [&](const Divisor& X, int kk) { return delta_estimate(f, X, kk, inf); };
  const Estimate eD = est(D, k), eE = est(E, k);
  const Estimate eDE = est(D + E, k - 1);
  const Real sum = eD.value.to_real() + eE.value.to_real();
  CHECK(mp::abs(eDE.value.to_real() - sum) <= eDE.error.to_real() + eD.error.to_real() + eE.error.to_real());
  const Estimate ePush = est(pushforward_map(f, D), k - 1);
  CHECK(mp::abs(ePush.value.to_real() - 4 * eD.value.to_real()) <= ePush.error.to_real() + 4 * eD.error.to_real());
  const Estimate ePull = est(pullback_map(f, D), k - 1);
  CHECK(mp::abs(ePull.value.to_real() - eD.value.to_real()) <= ePull.error.to_real() + eD.error.to_real());
}

TEST_CASE("relative critical escape") {
  // b = 0: zero up to the tail
  for (const QMatrix& A : {QMatrix{{1, 0}, {0, 1}}, QMatrix{{2, 1}, {1, 1}}, QMatrix{{1, -3}, {0, 1}}}) {
    const MinCritMap f = MinCritMap::make(2, A, {0, 0});
    const Estimate e = delta_relative_critical(f, 5, inf);
    CHECK(mp::abs(e.value.to_real()) <= e.error.to_real());
    CHECK(e.value.to_real() == 0);
  }
  {
    const Estimate e = delta_relative_critical(MinCritMap::unicritical(2, 3), 20, inf);
    CHECK(mp::abs(e.value.to_real() - Real("0.62381274988596298046953528485132")) < Real("1e-9"));
  }
  {
    const MinCritMap f = MinCritMap::make(2, {{1, 0}, {0, 1}}, {5, 7});
    const Estimate e = delta_relative_critical(f, 5, inf);
    const auto pc = place_constants(2, 2, inf);
    const LocalLog lower = mpq_class(1, 2) * log_abs(mpq_class(7), inf) -
                           mpq_class(1, 4) * matrix_lambda(f.A_inv, inf) - matrix_xi(f.A, inf) -
                           mpq_class(1, 2) * pc.c9;
    CHECK(e.value.to_real() + e.error.to_real() >= lower.to_real());
  }
}
