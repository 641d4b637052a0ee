#pragma once

// Randomized, reproducible checks of the explicit inequalities relating
// lambda, mu and the relative escape rate, with the constants as stated.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relesc/io.hpp"

namespace relesc {

enum class LemmaId {
  NORM_PROD,
  NORM_SUMPROD,
  SUM_LAMBDA,
  SUM_MU,
  MU_NONNEG_LAMBDA,
  MATRIX_XI_LE,
  MATRIX_LAMBDA_INV,
  POWER_PULL_LAMBDA,
  POWER_PULL_MU,
  POWER_PUSH_LAMBDA,
  POWER_PUSH_MU,
  LINEAR_PULL,
  LINEAR_PUSH,
  TC_MU,
  KEY_MU,
  KEY_LAMBDA,
  BASIN,
  DELTA_SANDWICH,
  CRIT_LOWER,
  CRIT_UPPER,
  THM_MAIN,
  PRODUCT_FORMULA,
  MU_LE_LAMBDA_OVER_DEG,
};

const std::vector<LemmaId>& all_lemmas();
std::string to_string(LemmaId id);
LemmaId parse_lemma(const std::string& s);
/// Lemmas whose hypotheses can fail; the targeted sub-profile feeds them.
bool is_conditional(LemmaId id);

struct Profile {
  std::string name = "default";
  std::vector<int> Ns = {1, 2};
  std::vector<int> ds = {2, 3};
  long coeff_height_bound = 9;
  int deg_bound = 3;
  std::vector<Place> places = {Place::infinity(), Place::prime(2), Place::prime(3), Place::prime(5)};
  // large ||b|| and divisors pushed towards H, so conditional lemmas bite
  bool targeted = false;
};

std::vector<Profile> default_profiles();
Profile profile_from_json(const json& j);

struct Instance {
  std::uint64_t seed = 0;
  std::string profile;
  bool targeted = false;
  int N = 1;
  int d = 2;
  Place v = Place::infinity();
  MinCritMap f;
  Divisor D = Divisor::point(0);   // not containing H or the origin
  std::vector<Divisor> parts;      // summands for the sum lemmas
  std::vector<Form> factors;       // forms for the norm lemmas
  std::vector<std::vector<Form>> sumprod;
  QVector c;                       // translation vector
  mpq_class alpha;                 // nonzero, for the product formula
  int resamples = 0;               // degenerate draws rejected
};

Instance random_instance(std::uint64_t seed, const Profile& profile);
json instance_to_json(const Instance& in);

struct CheckResult {
  LemmaId lemma = LemmaId::NORM_PROD;
  bool holds = true;
  bool vacuous = false;
  Real lhs = 0;
  Real rhs = 0;
  std::uint64_t instance_seed = 0;
};

CheckResult check(LemmaId lemma, const Instance& in);

struct SuiteConfig {
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<Profile> profiles = default_profiles();
  std::vector<LemmaId> lemmas = all_lemmas();
  int threads = 1;
};

struct LemmaTally {
  LemmaId lemma = LemmaId::NORM_PROD;
  long total = 0;
  long non_vacuous = 0;
  long failures = 0;
  std::optional<Real> worst_margin;  // min of rhs - lhs over non-vacuous checks
};

struct SuiteReport {
  std::vector<LemmaTally> tallies;
  std::vector<CheckResult> failures;
  long instances = 0;
  long resamples = 0;
  bool ok() const { return failures.empty(); }
};

SuiteReport run_suite(const SuiteConfig& config);
json report_to_json(const SuiteReport& r, const SuiteConfig& config);
std::string report_table(const SuiteReport& r);

/// Per-trial instance seed; distinct for distinct (seed, trial, stream).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

}  // namespace relesc
