#include "relesc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "relesc/errors.hpp"
#include "relesc/primes.hpp"

namespace relesc {

namespace mp = boost::multiprecision;

namespace {

struct LemmaName {
  LemmaId id;
  const char* name;
  bool conditional;
};

constexpr LemmaName kLemmas[] = {
    {LemmaId::NORM_PROD, "NORM_PROD", false},
    {LemmaId::NORM_SUMPROD, "NORM_SUMPROD", false},
    {LemmaId::SUM_LAMBDA, "SUM_LAMBDA", false},
    {LemmaId::SUM_MU, "SUM_MU", false},
    {LemmaId::MU_NONNEG_LAMBDA, "MU_NONNEG_LAMBDA", true},
    {LemmaId::MATRIX_XI_LE, "MATRIX_XI_LE", false},
    {LemmaId::MATRIX_LAMBDA_INV, "MATRIX_LAMBDA_INV", false},
    {LemmaId::POWER_PULL_LAMBDA, "POWER_PULL_LAMBDA", false},
    {LemmaId::POWER_PULL_MU, "POWER_PULL_MU", false},
    {LemmaId::POWER_PUSH_LAMBDA, "POWER_PUSH_LAMBDA", false},
    {LemmaId::POWER_PUSH_MU, "POWER_PUSH_MU", false},
    {LemmaId::LINEAR_PULL, "LINEAR_PULL", false},
    {LemmaId::LINEAR_PUSH, "LINEAR_PUSH", false},
    {LemmaId::TC_MU, "TC_MU", true},
    {LemmaId::KEY_MU, "KEY_MU", true},
    {LemmaId::KEY_LAMBDA, "KEY_LAMBDA", true},
    {LemmaId::BASIN, "BASIN", true},
    {LemmaId::DELTA_SANDWICH, "DELTA_SANDWICH", false},
    {LemmaId::CRIT_LOWER, "CRIT_LOWER", false},
    {LemmaId::CRIT_UPPER, "CRIT_UPPER", false},
    {LemmaId::THM_MAIN, "THM_MAIN", false},
    {LemmaId::PRODUCT_FORMULA, "PRODUCT_FORMULA", false},
    {LemmaId::MU_LE_LAMBDA_OVER_DEG, "MU_LE_LAMBDA_OVER_DEG", false},
};

const LemmaName& entry(LemmaId id) {
  for (const auto& e : kLemmas)
    if (e.id == id) return e;
  throw InternalError("unknown lemma id");
}

}  // namespace

const std::vector<LemmaId>& all_lemmas() {
  static const std::vector<LemmaId> ids = [] {
    std::vector<LemmaId> v;
    for (const auto& e : kLemmas) v.push_back(e.id);
    return v;
  }();
  return ids;
}

std::string to_string(LemmaId id) { return entry(id).name; }

LemmaId parse_lemma(const std::string& s) {
  for (const auto& e : kLemmas)
    if (s == e.name) return e.id;
  throw UsageError("unknown lemma '" + s + "'");
}

bool is_conditional(LemmaId id) { return entry(id).conditional; }

std::vector<Profile> default_profiles() {
  Profile targeted;
  targeted.name = "targeted";
  targeted.targeted = true;
  return {Profile{}, targeted};
}

Profile profile_from_json(const json& j) {
  Profile p;
  if (j.contains("name")) p.name = j.at("name").get<std::string>();
  if (j.contains("N")) p.Ns = j.at("N").get<std::vector<int>>();
  if (j.contains("d")) p.ds = j.at("d").get<std::vector<int>>();
  if (j.contains("coeff_height_bound")) p.coeff_height_bound = j.at("coeff_height_bound").get<long>();
  if (j.contains("deg_bound")) p.deg_bound = j.at("deg_bound").get<int>();
  if (j.contains("places")) {
    p.places.clear();
    for (const auto& s : j.at("places")) p.places.push_back(Place::parse(s.get<std::string>()));
  }
  if (j.contains("targeted")) p.targeted = j.at("targeted").get<bool>();
  for (int N : p.Ns)
    if (N < 1 || N > 2) throw UsageError("profile N must be 1 or 2");
  for (int d : p.ds)
    if (d < 2 || d > 5) throw UsageError("profile d must lie in [2, 5]");
  if (p.Ns.empty() || p.ds.empty() || p.places.empty()) throw UsageError("profile lists must be non-empty");
  if (p.coeff_height_bound < 1 || p.deg_bound < 1 || p.deg_bound > 4) throw UsageError("profile bounds out of range");
  return p;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ trial) ^ (stream * 0xd1b54a32d192ed03ULL));
}

// ---------------------------------------------------------------- sampling

namespace {

using Rng = std::mt19937_64;

long uniform(Rng& rng, long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(v.size()) - 1))];
}

mpq_class random_rational(Rng& rng, long H, bool nonzero) {
  for (;;) {
    mpq_class q(uniform(rng, -H, H), uniform(rng, 1, H));
    q.canonicalize();
    if (!nonzero || sgn(q) != 0) return q;
  }
}

void monomials(int nvars, int deg, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == nvars - 1) {
    cur.push_back(deg);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur.push_back(e);
    monomials(nvars, deg - e, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> monomials(int nvars, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  monomials(nvars, deg, cur, out);
  return out;
}

Form random_form(Rng& rng, int nvars, int deg, long H) {
  const auto monos = monomials(nvars, deg);
  for (;;) {
    std::vector<std::pair<std::vector<int>, mpq_class>> terms;
    for (const auto& m : monos)
      if (rng() % 2 == 0) terms.emplace_back(m, random_rational(rng, H, true));
    if (!terms.empty()) return Form::from_terms(nvars, deg, terms);
  }
}

// Divisor avoiding H and the origin; rejected draws are counted.
Divisor random_divisor(Rng& rng, int N, int deg, long H, int& resamples) {
  for (;;) {
    const Form F = random_form(rng, N + 1, deg, H);
    const Divisor D = Divisor::from_form(F);
    if (!D.contains_infinity() && !D.contains_origin()) return D;
    ++resamples;
  }
}

QMatrix random_sl(Rng& rng, int N, long bound) {
  QMatrix A = identity_matrix(N);
  if (N == 1) return A;
  const int steps = static_cast<int>(uniform(rng, 1, 6));
  for (int s = 0; s < steps; ++s) {
    QMatrix B = A;
    if (rng() % 5 == 0) {
      std::swap(B[0], B[1]);
      for (auto& x : B[0]) x = -x;
    } else {
      const int i = static_cast<int>(uniform(rng, 0, N - 1));
      int j = static_cast<int>(uniform(rng, 0, N - 2));
      if (j >= i) ++j;
      long t = uniform(rng, -2, 1);
      if (t >= 0) ++t;
      for (int col = 0; col < N; ++col) B[i][col] += t * B[j][col];
    }
    bool small = true;
    for (const auto& row : B)
      for (const auto& x : row)
        if (abs(x) > bound) small = false;
    if (small) A = std::move(B);
  }
  return A;
}

// F(X_1, ..., X_N, t X_{N+1}); raises mu by log|t|.
Divisor scale_last(const Divisor& D, const mpq_class& t) {
  const IntForm& F = D.form();
  const int last = F.num_vars() - 1;
  std::vector<std::pair<std::vector<int>, mpq_class>> terms;
  for (const auto& term : F.terms()) {
    mpq_class c = term.coeff;
    for (int e = 0; e < term.mono.exponent(last); ++e) c *= t;
    terms.emplace_back(term.mono.exponents(F.num_vars()), c);
  }
  return Divisor::from_form(Form::from_terms(F.num_vars(), F.degree(), terms));
}

Real log_size(Place v) { return v.is_archimedean() ? mp::log(Real(2)) : mp::log(Real(v.p())); }

// The integer m >= 0 with m * log_size(v) >= x.
long steps_for(const Real& x, Place v) {
  if (x <= 0) return 0;
  return static_cast<long>(mp::ceil(x / log_size(v)).convert_to<double>());
}

// t with log|t|_v = m * log_size(v)
mpq_class unit_power(Place v, long m) {
  mpz_class base = v.is_archimedean() ? 2 : v.p(), pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m));
  return v.is_archimedean() ? mpq_class(pw) : mpq_class(1, pw);
}

LocalLog lp(long n, Place v) { return log_plus_int(n, v); }
LocalLog lp(const mpz_class& n, Place v) { return log_plus_int(n, v); }

LocalLog arch_or_zero(const Real& x, Place v) { return v.is_archimedean() ? LocalLog::arch(x) : LocalLog::zero(v); }

// Shared pieces of the basin hypotheses.
LocalLog breq_rhs(const MinCritMap& f, Place v) {
  const int N = f.N, d = f.d;
  const PlaceConstants pc = place_constants(N, d, v);
  const LocalLog c8term = arch_or_zero(pc.c8.to_real() * (mp::sqrt(Real(d)) - 1), v);
  mpz_class dN;
  mpz_pow_ui(dN.get_mpz_t(), mpz_class(d).get_mpz_t(), static_cast<unsigned long>(N));
  return c8term + pc.c3 + pc.c5 + matrix_norm_log(f.A_inv, v) + mpq_class(d) * matrix_xi(f.A, v) +
         mpq_class(2 * d * N + 1) * lp(2, v) + mpq_class(mpz_class(2 * N - 2 + d * N * (dN - 1))) * lp(d, v);
}

LocalLog mureq_rhs(const MinCritMap& f, int degree, Place v) {
  const PlaceConstants pc = place_constants(f.N, f.d, v);
  LocalLog growth = LocalLog::zero(v);
  if (v.is_archimedean() && f.N >= 2)
    growth = LocalLog::arch(pc.c8.to_real() * (mp::pow(Real(degree), Real(1) / (2 * (f.N - 1))) - 1));
  return log_plus(gauss_norm_log(f.b, v)) + growth - matrix_xi(f.A, v);
}

LocalLog mulower_rhs(const MinCritMap& f, int degree, Place v) {
  const PlaceConstants pc = place_constants(f.N, f.d, v);
  return log_plus(gauss_norm_log(f.b, v)) + pc.c3 + pc.c5 + matrix_norm_log(f.A_inv, v) + mpq_class(2) * lp(degree, v);
}

LocalLog tc_rhs(const QVector& c, int degree, int N, int d, Place v) {
  const PlaceConstants pc = place_constants(N, d, v);
  return log_plus(gauss_norm_log(c, v)) + pc.c3 + mpq_class(2) * lp(degree, v);
}

}  // namespace

Instance random_instance(std::uint64_t seed, const Profile& profile) {
  Rng rng(seed);
  Instance in;
  in.seed = seed;
  in.profile = profile.name;
  in.targeted = profile.targeted;
  in.N = pick(rng, profile.Ns);
  in.d = pick(rng, profile.ds);
  in.v = pick(rng, profile.places);
  const long H = profile.coeff_height_bound;
  const int N = in.N, d = in.d;
  const Place v = in.v;
  // N = 2 push-forwards grow fast; keep their divisors of degree <= 2
  const int deg_cap = N == 1 ? profile.deg_bound : std::min(profile.deg_bound, 2);

  const QMatrix A = random_sl(rng, N, std::max(2L, H / 3));
  QVector b(static_cast<std::size_t>(N));
  for (auto& x : b) x = random_rational(rng, H, false);
  in.f = MinCritMap::make(d, A, b);

  const int deg = static_cast<int>(uniform(rng, 1, deg_cap));
  in.D = random_divisor(rng, N, deg, H, in.resamples);

  in.c.resize(static_cast<std::size_t>(N));
  for (auto& x : in.c) x = random_rational(rng, H, false);

  if (profile.targeted) {
    // ||b||_v beyond the basin threshold, then D pushed towards H past
    // every conditional hypothesis, except in a quarter of the draws.
    const Real need_b = breq_rhs(in.f, v).to_real() / (d - 1) + Real(uniform(rng, 1, 6)) / 2;
    const long mb = std::max(1L, steps_for(need_b, v));
    QVector big(static_cast<std::size_t>(N));
    for (auto& x : big) {
      long n;
      do n = uniform(rng, -H, H);
      while (n == 0 || (!v.is_archimedean() && n % v.p() == 0));
      x = mpq_class(n) * unit_power(v, mb);
    }
    in.f = MinCritMap::make(d, A, big);
    if (rng() % 4 != 0) {
      const Real mu0 = mu_local(in.D, v).to_real();
      const int dd = in.D.degree();
      Real need = max(max(mureq_rhs(in.f, dd, v), mulower_rhs(in.f, dd, v)), tc_rhs(in.c, dd, N, d, v)).to_real();
      need += Real(uniform(rng, 1, 4)) / 2 - mu0;
      in.D = scale_last(in.D, unit_power(v, steps_for(need, v)));
    }
  }

  const int nparts = static_cast<int>(uniform(rng, 2, 3));
  for (int i = 0; i < nparts; ++i)
    in.parts.push_back(random_divisor(rng, N, static_cast<int>(uniform(rng, 1, deg_cap)), H, in.resamples));

  const int nfac = static_cast<int>(uniform(rng, 2, 3));
  for (int i = 0; i < nfac; ++i)
    in.factors.push_back(random_form(rng, N + 1, static_cast<int>(uniform(rng, 1, profile.deg_bound)), H));

  const int delta = static_cast<int>(uniform(rng, 2, profile.deg_bound + 1));
  const int nsum = static_cast<int>(uniform(rng, 1, 3));
  for (int i = 0; i < nsum; ++i) {
    std::vector<Form> group;
    int left = delta;
    while (left > 0) {
      const int e = static_cast<int>(uniform(rng, 1, left));
      group.push_back(random_form(rng, N + 1, e, H));
      left -= e;
    }
    in.sumprod.push_back(std::move(group));
  }

  in.alpha = random_rational(rng, 1000, true);
  return in;
}

json instance_to_json(const Instance& in) {
  json parts = json::array(), factors = json::array(), sumprod = json::array(), c = json::array();
  for (const auto& D : in.parts) parts.push_back(form_to_json(D.form()));
  for (const auto& F : in.factors) factors.push_back(form_to_json(F));
  for (const auto& g : in.sumprod) {
    json group = json::array();
    for (const auto& F : g) group.push_back(form_to_json(F));
    sumprod.push_back(group);
  }
  for (const auto& x : in.c) c.push_back(rational_string(x));
  return {{"seed", std::to_string(in.seed)},
          {"profile", in.profile},
          {"place", in.v.name()},
          {"map", map_to_json(in.f)},
          {"D", form_to_json(in.D.form())},
          {"parts", parts},
          {"factors", factors},
          {"sumprod", sumprod},
          {"c", c},
          {"alpha", rational_string(in.alpha)},
          {"resamples", in.resamples}};
}

// ---------------------------------------------------------------- checks

namespace {

struct Side {
  LocalLog lhs, rhs;
};

CheckResult verdict(LemmaId id, const Instance& in, std::initializer_list<Side> sides) {
  CheckResult r;
  r.lemma = id;
  r.instance_seed = in.seed;
  bool first = true;
  Real best = 0;
  for (const Side& s : sides) {
    if (!LocalLog::le_with_slack(s.lhs, s.rhs)) r.holds = false;
    const Real margin = s.rhs.to_real() - s.lhs.to_real();
    if (first || margin < best) {
      best = margin;
      r.lhs = s.lhs.to_real();
      r.rhs = s.rhs.to_real();
      first = false;
    }
  }
  return r;
}

CheckResult vacuous(LemmaId id, const Instance& in) {
  CheckResult r;
  r.lemma = id;
  r.instance_seed = in.seed;
  r.vacuous = true;
  return r;
}

CheckResult broken(LemmaId id, const Instance& in) {
  CheckResult r;
  r.lemma = id;
  r.instance_seed = in.seed;
  r.holds = false;
  return r;
}

// Exact p-adic iteration is far costlier than the scaled archimedean one,
// and its tails are small, so it runs shallower.
int delta_depth(int N, int d, Place v) {
  if (!v.is_archimedean()) return N == 1 ? 8 : 2;
  return N == 1 ? 12 : (d == 2 ? 4 : 3);
}

Estimate delta_with_fallback(const MinCritMap& f, const Divisor& D, Place v) {
  for (int k = delta_depth(f.N, f.d, v);; --k) {
    try {
      return delta_estimate(f, D, k, v);
    } catch (const BudgetExceeded&) {
      if (k == 0) throw;
    }
  }
}

Estimate crit_with_fallback(const MinCritMap& f, Place v) {
  for (int k = delta_depth(f.N, f.d, v) + 1;; --k) {
    try {
      return delta_relative_critical(f, k, v);
    } catch (const BudgetExceeded&) {
      if (k == 0) throw;
    }
  }
}

mpz_class pow_z(long b, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), mpz_class(b).get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

CheckResult check_impl(LemmaId id, const Instance& in) {
  const Place v = in.v;
  const MinCritMap& f = in.f;
  const int N = f.N, d = f.d;
  const PlaceConstants pc = place_constants(N, d, v);
  const LocalLog l2 = lp(2, v);
  const LocalLog zero = LocalLog::zero(v);
  const Divisor& D = in.D;
  const int deg = D.degree();
  const mpz_class dN = pow_z(d, N);

  switch (id) {
    case LemmaId::NORM_PROD: {
      const int n = static_cast<int>(in.factors[0].num_vars()) - 1;
      Form P = in.factors[0];
      LocalLog sum = gauss_norm_log(in.factors[0], v);
      int total = in.factors[0].degree();
      for (std::size_t i = 1; i < in.factors.size(); ++i) {
        P = P * in.factors[i];
        sum += gauss_norm_log(in.factors[i], v);
        total += in.factors[i].degree();
      }
      const LocalLog E = mpq_class(2 * n * total) * l2;
      const LocalLog diff = gauss_norm_log(P, v) - sum;
      return verdict(id, in, {{-E, diff}, {diff, E}});
    }
    case LemmaId::NORM_SUMPROD: {
      const int n = in.sumprod[0][0].num_vars() - 1;
      std::optional<Form> S;
      std::optional<LocalLog> best;
      int delta = 0;
      for (const auto& group : in.sumprod) {
        Form P = group[0];
        LocalLog s = gauss_norm_log(group[0], v);
        for (std::size_t j = 1; j < group.size(); ++j) {
          P = P * group[j];
          s += gauss_norm_log(group[j], v);
        }
        delta = P.degree();
        best = best ? max(*best, s) : s;
        if (S) *S += P;
        else S = P;
      }
      const LocalLog rhs = *best + lp(static_cast<long>(in.sumprod.size()), v) + mpq_class(2 * n * delta) * l2;
      return verdict(id, in, {{gauss_norm_log(*S, v), rhs}});
    }
    case LemmaId::SUM_LAMBDA: {
      Divisor S = in.parts[0];
      LocalLog sum = lambda_local(in.parts[0], v);
      long total = in.parts[0].degree();
      for (std::size_t i = 1; i < in.parts.size(); ++i) {
        S = S + in.parts[i];
        sum += lambda_local(in.parts[i], v);
        total += in.parts[i].degree();
      }
      const LocalLog E = mpq_class(4 * N * total) * l2;
      const LocalLog diff = lambda_local(S, v) - sum;
      return verdict(id, in, {{-E, diff}, {diff, E}});
    }
    case LemmaId::SUM_MU: {
      Divisor S = in.parts[0];
      LocalLog m = mu_local(in.parts[0], v);
      long total = in.parts[0].degree();
      for (std::size_t i = 1; i < in.parts.size(); ++i) {
        S = S + in.parts[i];
        m = min(m, mu_local(in.parts[i], v));
        total += in.parts[i].degree();
      }
      const LocalLog rhs = m - mpq_class(2 * N) * l2 - mpq_class(static_cast<long>(in.parts.size()) - 1) * lp(total, v);
      return verdict(id, in, {{rhs, mu_local(S, v)}});
    }
    case LemmaId::MU_NONNEG_LAMBDA: {
      if (mu_local(D, v) < zero) return vacuous(id, in);
      const LocalLog formula =
          log_abs(top_coefficient(D.form()), v) - gauss_norm_log(slice(D.form(), 0), v);
      const LocalLog lam = lambda_local(D, v);
      return verdict(id, in, {{lam, formula}, {formula, lam}});
    }
    case LemmaId::MATRIX_XI_LE: {
      const LocalLog lam = matrix_lambda(f.A, v), xi = matrix_xi(f.A, v);
      return verdict(id, in, {{xi, lam + lp(N, v)}, {zero, lam}, {zero, xi}});
    }
    case LemmaId::MATRIX_LAMBDA_INV:
      return verdict(id, in, {{matrix_lambda(f.A_inv, v), mpq_class(N - 1) * matrix_lambda(f.A, v)}});
    case LemmaId::POWER_PULL_LAMBDA: {
      const LocalLog a = lambda_local(pullback_power(D, d), v), b = lambda_local(D, v);
      return verdict(id, in, {{a, b}, {b, a}});
    }
    case LemmaId::POWER_PULL_MU: {
      const LocalLog a = mu_local(pullback_power(D, d), v), b = mpq_class(1, d) * mu_local(D, v);
      return verdict(id, in, {{a, b}, {b, a}});
    }
    case LemmaId::POWER_PUSH_LAMBDA: {
      const LocalLog diff = lambda_local(pushforward_power(D, d), v) - mpq_class(dN) * lambda_local(D, v);
      const LocalLog E = mpq_class(mpz_class(4 * N * deg * dN)) * l2;
      return verdict(id, in, {{-E, diff}, {diff, E}});
    }
    case LemmaId::POWER_PUSH_MU: {
      const LocalLog rhs = mpq_class(d) * mu_local(D, v) - mpq_class(2 * d * N) * l2 -
                           mpq_class(mpz_class(d * (dN - 1))) * lp(mpz_class(dN * deg), v);
      return verdict(id, in, {{rhs, mu_local(pushforward_power(D, d), v)}});
    }
    case LemmaId::LINEAR_PULL:
    case LemmaId::LINEAR_PUSH: {
      const LocalLog base = matrix_norm_log(f.L, v) - matrix_norm_log(f.A, v) + pc.c2;
      const LocalLog withA = mpq_class(deg) * (base + matrix_lambda(f.A, v)) + pc.c1;
      const LocalLog withL = mpq_class(deg) * (base + matrix_lambda(f.L, v)) + pc.c1;
      const bool pull = id == LemmaId::LINEAR_PULL;
      const Divisor E = pull ? pullback_linear(f, D) : pushforward_linear(f, D);
      const LocalLog diff = lambda_local(E, v) - lambda_local(D, v);
      const LocalLog& lower = pull ? withL : withA;
      const LocalLog& upper = pull ? withA : withL;
      return verdict(id, in, {{-lower, diff}, {diff, upper}});
    }
    case LemmaId::TC_MU: {
      const LocalLog mu = mu_local(D, v);
      if (!(mu > tc_rhs(in.c, deg, N, d, v))) return vacuous(id, in);
      const Divisor E = pullback_translation(in.c, D);
      if (E.contains_infinity() || E.contains_origin()) return broken(id, in);
      return verdict(id, in, {{mu - lp(deg, v) - l2, mu_local(E, v)}});
    }
    case LemmaId::KEY_MU:
    case LemmaId::KEY_LAMBDA: {
      const LocalLog mu = mu_local(D, v);
      if (!(mu > mulower_rhs(f, deg, v))) return vacuous(id, in);
      const Divisor E = pushforward_linear(f, D);
      if (id == LemmaId::KEY_MU) {
        if (E.contains_origin()) return broken(id, in);
        const LocalLog rhs = mu - lp(deg, v) - l2 - pc.c5 - matrix_norm_log(f.A_inv, v);
        return verdict(id, in, {{rhs, mu_local(E, v)}});
      }
      const LocalLog lam = lambda_local(D, v), lamE = lambda_local(E, v);
      const LocalLog l2N = lp(2 * N, v);
      const LocalLog lower = lam - mpq_class(deg) * (matrix_norm_log(f.A_inv, v) + l2N) - mpq_class(N) * l2;
      const LocalLog upper = lam + mpq_class(deg) * (matrix_norm_log(f.A, v) + l2N) + mpq_class(N) * l2;
      return verdict(id, in, {{lower, lamE}, {lamE, upper}});
    }
    case LemmaId::BASIN: {
      const LocalLog breq_lhs = mpq_class(d - 1) * log_plus(gauss_norm_log(f.b, v));
      if (!(breq_lhs > breq_rhs(f, v))) return vacuous(id, in);
      if (mu_local(D, v) < mureq_rhs(f, deg, v)) return vacuous(id, in);
      const Estimate delta = delta_with_fallback(f, D, v);
      const LocalLog rhs = lambda_local(D, v) -
                           mpq_class(deg, d - 1) * (matrix_norm_log(f.A_inv, v) + lp(2 * N, v)) -
                           mpq_class(mpz_class(N), mpz_class(dN - 1)) * l2;
      // closure of the mu condition under f_*
      const Divisor E = pushforward_map(f, D);
      if (E.contains_origin()) return broken(id, in);
      return verdict(id, in, {{rhs, delta.value + delta.error}, {mureq_rhs(f, E.degree(), v), mu_local(E, v)}});
    }
    case LemmaId::DELTA_SANDWICH: {
      const Estimate delta = delta_with_fallback(f, D, v);
      const LocalLog lam = lambda_local(D, v);
      const LocalLog base = matrix_norm_log(f.L, v) - matrix_norm_log(f.A, v) + lp(4 * N * (N + 1), v) +
                            mpq_class(4 * N * d) * l2;
      const mpq_class w(deg, d - 1);
      const LocalLog tail = mpq_class(mpz_class(1), mpz_class(dN - 1)) * pc.c1;
      const LocalLog lower = -(w * (base + matrix_lambda(f.A, v))) - tail;
      const LocalLog upper = w * (base + matrix_lambda(f.L, v)) + tail;
      return verdict(id, in,
                     {{lower, delta.value + delta.error - lam}, {delta.value - delta.error - lam, upper}});
    }
    case LemmaId::CRIT_LOWER: {
      const Estimate crit = crit_with_fallback(f, v);
      const LocalLog rhs = mpq_class(d - 1, d) * log_plus(gauss_norm_log(f.b, v)) -
                           mpq_class(1, N * d) * matrix_lambda(f.A_inv, v) - matrix_xi(f.A, v) -
                           mpq_class(d - 1, d) * pc.c9;
      return verdict(id, in, {{rhs, crit.value + crit.error}});
    }
    case LemmaId::CRIT_UPPER: {
      const Estimate crit = crit_with_fallback(f, v);
      const LocalLog rhs = mpq_class(N * (N + 2)) * log_plus(gauss_norm_log(f.b, v)) +
                           mpq_class(N + 1) * matrix_lambda(f.A, v) + mpq_class(N) * lp(factorial(N + 1), v) +
                           lp(factorial(N), v) + mpq_class(N) * lp(4 * N * (N + 1), v) +
                           mpq_class(4 * N * N * d) * l2 + mpq_class(mpz_class(1), mpz_class(dN - 1)) * pc.c1;
      return verdict(id, in, {{crit.value - crit.error, rhs}});
    }
    case LemmaId::THM_MAIN: {
      const MainBoundsReport r = thm_main_bounds(f, delta_depth(N, d, Place::infinity()) + 1, {});
      CheckResult res;
      res.lemma = id;
      res.instance_seed = in.seed;
      res.holds = r.verdict != Verdict::Violation;
      const Real lo = r.estimate.value - r.estimate.error, hi = r.estimate.value + r.estimate.error;
      if (hi - r.lower < r.upper - lo) {
        res.lhs = r.lower;
        res.rhs = hi;
      } else {
        res.lhs = lo;
        res.rhs = r.upper;
      }
      return res;
    }
    case LemmaId::PRODUCT_FORMULA: {
      Real sum = log_abs(in.alpha, Place::infinity()).to_real();
      mpz_class nd = in.alpha.get_num() * in.alpha.get_den();
      if (nd != 1 && nd != -1)
        for (const auto& p : prime_factors(nd)) sum += log_abs(in.alpha, Place::prime(p.get_si())).to_real();
      const LocalLog s = LocalLog::arch(mp::abs(sum));
      return verdict(id, in, {{s, LocalLog::zero(Place::infinity())}});
    }
    case LemmaId::MU_LE_LAMBDA_OVER_DEG:
      return verdict(id, in, {{mu_local(D, v), mpq_class(1, deg) * lambda_local(D, v)}});
  }
  throw InternalError("unhandled lemma");
}

}  // namespace

CheckResult check(LemmaId lemma, const Instance& in) {
  try {
    return check_impl(lemma, in);
  } catch (const DomainError&) {
    // a conclusion left the domain (e.g. a divisor through the origin)
    return broken(lemma, in);
  } catch (const InternalError&) {
    return broken(lemma, in);
  }
}

// ---------------------------------------------------------------- suite

SuiteReport run_suite(const SuiteConfig& config) {
  if (config.trials < 1) throw UsageError("trials must be at least 1");
  SuiteReport report;
  for (LemmaId id : config.lemmas) report.tallies.push_back({id, 0, 0, 0, std::nullopt});
  if (config.profiles.empty() || config.lemmas.empty()) return report;

  struct Slot {
    std::vector<CheckResult> results;
    int resamples = 0;
  };
  const std::size_t nprof = config.profiles.size();
  const std::size_t nslots = static_cast<std::size_t>(config.trials) * nprof;
  std::vector<Slot> slots(nslots);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= nslots) return;
      try {
        const std::size_t trial = i / nprof, prof = i % nprof;
        const Profile& profile = config.profiles[prof];
        const Instance in = random_instance(trial_seed(config.seed, trial, prof), profile);
        slots[i].resamples = in.resamples;
        for (LemmaId id : config.lemmas) {
          if (profile.targeted && !is_conditional(id)) continue;
          slots[i].results.push_back(check(id, in));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, config.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::map<LemmaId, std::size_t> index;
  for (std::size_t i = 0; i < report.tallies.size(); ++i) index[report.tallies[i].lemma] = i;
  for (const Slot& s : slots) {
    ++report.instances;
    report.resamples += s.resamples;
    for (const CheckResult& r : s.results) {
      LemmaTally& t = report.tallies[index.at(r.lemma)];
      ++t.total;
      if (r.vacuous) continue;
      ++t.non_vacuous;
      const Real margin = r.rhs - r.lhs;
      if (!t.worst_margin || margin < *t.worst_margin) t.worst_margin = margin;
      if (!r.holds) {
        ++t.failures;
        report.failures.push_back(r);
      }
    }
  }
  return report;
}

json report_to_json(const SuiteReport& r, const SuiteConfig& config) {
  json profiles = json::array(), lemmas = json::array(), tallies = json::array(), failures = json::array();
  for (const auto& p : config.profiles) profiles.push_back(p.name);
  for (LemmaId id : config.lemmas) lemmas.push_back(to_string(id));
  for (const auto& t : r.tallies)
    tallies.push_back({{"lemma", to_string(t.lemma)},
                       {"total", t.total},
                       {"non_vacuous", t.non_vacuous},
                       {"failures", t.failures},
                       {"worst_margin", t.worst_margin ? format_real(*t.worst_margin, 12) : "n/a"}});
  for (const auto& f : r.failures)
    failures.push_back({{"lemma", to_string(f.lemma)},
                        {"seed", std::to_string(f.instance_seed)},
                        {"lhs", format_real(f.lhs, 20)},
                        {"rhs", format_real(f.rhs, 20)}});
  return {{"config", {{"trials", config.trials}, {"seed", std::to_string(config.seed)}, {"profiles", profiles}, {"lemmas", lemmas}}},
          {"instances", r.instances},
          {"resampled_degenerate", r.resamples},
          {"lemmas", tallies},
          {"failures", failures},
          {"ok", r.ok()}};
}

std::string report_table(const SuiteReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "lemma" << std::right << std::setw(8) << "total" << std::setw(10) << "nonvac"
      << std::setw(8) << "fail" << "  worst margin\n";
  for (const auto& t : r.tallies)
    out << std::left << std::setw(24) << to_string(t.lemma) << std::right << std::setw(8) << t.total << std::setw(10)
        << t.non_vacuous << std::setw(8) << t.failures << "  "
        << (t.worst_margin ? format_real(*t.worst_margin, 6) : std::string("n/a")) << "\n";
  out << r.instances << " instances, " << r.resamples << " degenerate draws resampled, " << r.failures.size()
      << " failures\n";
  return out.str();
}

}  // namespace relesc
