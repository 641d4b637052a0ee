#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relesc/heights.hpp"

using namespace relesc;
namespace mp = boost::multiprecision;

namespace {

const Place inf = Place::infinity();

bool near(const Real& a, const Real& b, const char* tol = "1e-40") { return mp::abs(a - b) < Real(tol); }

// Real orbit of 0 under z^2 + c, log+|z_k| / 2^k at large k.
Real arch_rate(const mpq_class& c, int k) {
  Real z = 0, cr = to_real(c);
  for (int i = 0; i < k; ++i) z = z * z + cr;
  Real l = mp::log(mp::abs(z));
  return (l < 0 ? Real(0) : l) / mp::pow(Real(2), k);
}

bool contains(const GlobalEstimate& g, const Real& t) { return mp::abs(g.value - t) <= g.error + real_slack(); }

}  // namespace

TEST_CASE("divisor heights") {
  CHECK(near(height_divisor(Divisor::point(3)), mp::log(Real(3))));
  CHECK(near(height_divisor(Divisor::point(mpq_class(2, 3))), mp::log(Real(3))));
  CHECK(near(relative_height(Divisor::point(mpq_class(2, 3))), mp::log(Real(3))));
  const MinCritMap f = MinCritMap::make(2, {{1, 0}, {0, 1}}, {0, 0});
  CHECK(near(relative_height(critical_divisor(f)), Real(0)));
  const Divisor scaled = Divisor::from_form(Form::from_terms(2, 1, {{{1, 0}, 6}, {{0, 1}, mpq_class(-4, 5)}}));
  const Divisor base = Divisor::from_form(Form::from_terms(2, 1, {{{1, 0}, 15}, {{0, 1}, -2}}));
  CHECK(scaled == base);
  CHECK(near(relative_height(scaled), relative_height(base)));
}

TEST_CASE("relative height by places") {
  for (const mpq_class c : {mpq_class(3), mpq_class(2, 9), mpq_class(-35, 12), mpq_class(1, 1024)}) {
    const Divisor D = Divisor::point(c);
    CHECK(near(relative_height(D), relative_height_by_places(D), "1e-35"));
  }
  const Divisor line = Divisor::from_form(Form::from_terms(3, 1, {{{1, 0, 0}, 6}, {{0, 1, 0}, 10}, {{0, 0, 1}, 7}}));
  CHECK(near(relative_height(line), relative_height_by_places(line), "1e-35"));
  CHECK_THROWS_AS(relative_height(Divisor::at_infinity(1)), DomainError);
}

TEST_CASE("point and matrix heights") {
  CHECK(near(point_height({mpq_class(3, 2)}), mp::log(Real(3))));
  CHECK(near(point_height({0, 0}), Real(0)));
  CHECK(near(point_height({mpq_class(1, 6), mpq_class(1, 4)}), mp::log(Real(12))));
  CHECK(near(matrix_height({{1, 0}, {0, 1}}), Real(0)));
  CHECK(near(matrix_height({{2, 1}, {1, 1}}), mp::log(Real(2))));
  CHECK(near(matrix_height({{mpq_class(1, 2), 0}, {0, 2}}), mp::log(Real(4))));
}

TEST_CASE("unicritical global heights") {
  const Divisor zero = Divisor::point(0);
  auto z2 = MinCritMap::unicritical(2, 0);
  const GlobalEstimate g0 = relative_canonical_height(z2, zero, 20);
  CHECK(g0.value == 0);

  auto z3 = MinCritMap::unicritical(2, 3);
  const GlobalEstimate g3 = relative_canonical_height(z3, zero, 20);
  CHECK(contains(g3, Real("0.62381274988596298046953528485132")));
  CHECK(g3.error < Real("2e-5"));

  auto zh = MinCritMap::unicritical(2, mpq_class(1, 2));
  const GlobalEstimate gh = relative_canonical_height(zh, zero, 20);
  const Real truth = arch_rate(mpq_class(1, 2), 40) + mp::log(Real(2)) / 2;
  CHECK(contains(gh, truth));
  CHECK(gh.error < Real("1e-3"));
}

TEST_CASE("critical height") {
  const MinCritMap f0 = MinCritMap::make(2, {{2, 1}, {1, 1}}, {0, 0});
  const GlobalEstimate g0 = relative_critical_height(f0, 5);
  CHECK(g0.value == 0);

  const MinCritMap f = MinCritMap::make(2, {{1, 1}, {0, 1}}, {3, mpq_class(1, 2)});
  const GlobalEstimate g = relative_critical_height(f, 4);
  const GlobalEstimate p = [&] {
    GlobalEstimate s;
    const Real w = Real(1) / 2;
    for (int i = 0; i < 2; ++i) {
      const GlobalEstimate part = relative_canonical_height_by_places(f, branch_hyperplane(f, i), 3, g.places);
      s.value += w * part.value;
      s.error += w * part.error;
    }
    return s;
  }();
  CHECK(mp::abs(g.value - p.value) <= g.error + p.error);

  const GlobalEstimate k0 = relative_critical_height(f, 0);
  CHECK(k0.value == 0);
  CHECK(k0.error > 0);
}

TEST_CASE("main bounds") {
  const MainBoundsReport r = thm_main_bounds(MinCritMap::unicritical(2, 3), 20, {});
  CHECK(r.verdict == Verdict::WithinBounds);
  CHECK(near(r.h_b, mp::log(Real(3))));
  const MainBoundsReport r0 = thm_main_bounds(MinCritMap::make(2, {{2, 1}, {1, 1}}, {0, 0}), 4, {});
  CHECK(r0.lower <= 0);
  CHECK(r0.verdict == Verdict::WithinBounds);
  CHECK(main_bound_C1(1, 2) > 0);
  CHECK(main_bound_C2(2, 2) > main_bound_C2(1, 2));
}

TEST_CASE("good reduction") {
  CHECK(good_reduction(MinCritMap::unicritical(2, mpq_class(1, 2)), 2).result == Reduction::Bad);
  CHECK(good_reduction(MinCritMap::unicritical(2, 3), 2).result == Reduction::Good);
  const MinCritMap rot = MinCritMap::make(2, {{0, -1}, {1, 0}}, {mpq_class(1, 3), 0});
  CHECK(good_reduction(rot, 3).result == Reduction::Bad);
  CHECK(good_reduction(rot, 2).result == Reduction::Good);
  CHECK(good_reduction(rot, 3).epsilon == 1);
  const MinCritMap nonint = MinCritMap::make(2, {{2, 0}, {0, mpq_class(1, 2)}}, {0, 0});
  CHECK(good_reduction(nonint, 2).result == Reduction::HypothesisNotMet);
  CHECK(good_reduction(nonint, 3).result == Reduction::Good);
}
