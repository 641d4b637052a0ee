// Command-line front end: escape rates, critical heights, good reduction,
// the lemma suite, grid renders and PCF scans.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "relesc/errors.hpp"
#include "relesc/harness.hpp"
#include "relesc/io.hpp"
#include "relesc/render.hpp"
#include "relesc/unicritical.hpp"

using namespace relesc;

namespace {

struct Globals {
  int precision = 0;  // 0: take RELESC_PRECISION or the default
  int threads = 0;
  std::uint64_t seed = 1;
  std::string out;
};

constexpr int kDefaultDigits = 30;

int resolved_digits(const Globals& g) {
  int p = g.precision;
  if (p == 0) {
    p = kDefaultDigits;
    if (const char* env = std::getenv("RELESC_PRECISION")) {
      try {
        p = std::stoi(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("RELESC_PRECISION is not an integer: '") + env + "'");
      }
    }
  }
  return std::clamp(p, 10, 55);
}

int resolved_threads(const Globals& g) {
  if (g.threads > 0) return g.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

json base_config(const std::string& command, const Globals& g) {
  return {{"command", command},
          {"precision", resolved_digits(g)},
          {"threads", resolved_threads(g)},
          {"seed", std::to_string(g.seed)}};
}

void emit(const json& j, const Globals& g) {
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + g.out + "'");
  f << text;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << bytes;
}

std::vector<Place> parse_places(const std::string& spec) {
  if (spec == "auto") return {};
  std::vector<Place> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(Place::parse(tok));
  if (out.empty()) throw UsageError("empty place list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) parts.push_back(tok);
  return parts;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s) {
  const double x = parse_double(s);
  if (x != std::floor(x)) throw UsageError("not an integer: '" + s + "'");
  return static_cast<int>(x);
}

// ---------------------------------------------------------------- commands

struct EscapeArgs {
  std::string map, divisor, point, place = "inf", mode = "auto";
  int iters = -1;
};

int cmd_escape_rate(const EscapeArgs& a, const Globals& g) {
  const MinCritMap f = map_from_json(read_json_file(a.map));
  if (a.divisor.empty() == a.point.empty()) throw UsageError("give exactly one of --divisor and --point");
  const Divisor D = a.point.empty() ? Divisor::from_form(form_from_json(read_json_file(a.divisor)))
                                    : Divisor::point(parse_rational(a.point));
  const Place v = Place::parse(a.place);
  const int k = a.iters >= 0 ? a.iters : default_iterations(f);
  DeltaMode mode = DeltaMode::Auto;
  if (a.mode == "exact") mode = DeltaMode::Exact;
  else if (a.mode == "scaled") mode = DeltaMode::Scaled;
  else if (a.mode != "auto") throw UsageError("mode must be auto, exact or scaled");
  const Estimate e = delta_estimate(f, D, k, v, mode);
  json cfg = base_config("escape-rate", g);
  cfg["map"] = map_to_json(f);
  cfg["divisor"] = form_to_json(D.form());
  cfg["place"] = v.name();
  cfg["iters"] = k;
  cfg["mode"] = a.mode;
  json out = estimate_to_json(e, resolved_digits(g));
  out["config"] = cfg;
  emit(out, g);
  return 0;
}

struct CriticalArgs {
  std::string map, places = "auto";
  int iters = -1;
};

int cmd_critical_height(const CriticalArgs& a, const Globals& g) {
  const MinCritMap f = map_from_json(read_json_file(a.map));
  const int k = a.iters >= 0 ? a.iters : default_iterations(f);
  const MainBoundsReport r = thm_main_bounds(f, k, parse_places(a.places));
  const int digits = resolved_digits(g);
  json cfg = base_config("critical-height", g);
  cfg["map"] = map_to_json(f);
  cfg["iters"] = k;
  cfg["places"] = a.places;
  json out = global_estimate_to_json(r.estimate, digits);
  out["lower_bound"] = format_real(r.lower, digits);
  out["upper_bound"] = format_real(r.upper, digits);
  out["verdict"] = to_string(r.verdict);
  out["h_b"] = format_real(r.h_b, digits);
  out["h_A"] = format_real(r.h_A, digits);
  out["C1"] = format_real(r.C1, digits);
  out["C2"] = format_real(r.C2, digits);
  out["config"] = cfg;
  emit(out, g);
  return r.verdict == Verdict::Violation ? 1 : 0;
}

int cmd_good_reduction(const std::string& map, long p, const Globals& g) {
  const MinCritMap f = map_from_json(read_json_file(map));
  const ReductionReport r = good_reduction(f, p);
  json cfg = base_config("good-reduction", g);
  cfg["map"] = map_to_json(f);
  cfg["prime"] = p;
  json out = {{"result", to_string(r.result)}, {"reason", r.reason}};
  if (r.result != Reduction::HypothesisNotMet) {
    out["epsilon"] = r.epsilon;
    out["resultant_unit"] = r.resultant_unit;
  }
  out["config"] = cfg;
  emit(out, g);
  switch (r.result) {
    case Reduction::Good: return 0;
    case Reduction::Bad: return 1;
    case Reduction::HypothesisNotMet: return 2;
  }
  return 2;
}

struct LemmaArgs {
  int trials = 100;
  std::string profile, lemmas;
};

std::vector<Profile> load_profiles(const std::string& path) {
  const json j = read_json_file(path);
  const json& list = j.is_object() && j.contains("profiles") ? j.at("profiles") : j;
  std::vector<Profile> out;
  try {
    if (list.is_array())
      for (const auto& p : list) out.push_back(profile_from_json(p));
    else
      out.push_back(profile_from_json(list));
  } catch (const json::exception& ex) {
    throw UsageError(std::string("bad profile: ") + ex.what());
  }
  return out;
}

int cmd_verify_lemmas(const LemmaArgs& a, const Globals& g) {
  SuiteConfig c;
  c.trials = a.trials;
  c.seed = g.seed;
  c.threads = resolved_threads(g);
  if (!a.profile.empty()) c.profiles = load_profiles(a.profile);
  if (!a.lemmas.empty()) {
    c.lemmas.clear();
    for (const auto& s : split(a.lemmas, ','))
      if (!s.empty()) c.lemmas.push_back(parse_lemma(s));
  }
  const SuiteReport r = run_suite(c);
  json out = report_to_json(r, c);
  // the thread count does not affect the report
  json cfg = base_config("verify-lemmas", g);
  cfg.erase("threads");
  out["run"] = cfg;
  if (g.out.empty()) {
    std::cout << report_table(r) << "\n" << out.dump(2) << "\n";
  } else {
    std::cout << report_table(r);
    emit(out, g);
  }
  return r.ok() ? 0 : 1;
}

struct MandelArgs {
  int d = 2;
  std::string grid = "-2.5:1.5:1.5:100";
  std::string map;
  int iters = -1;
};

int cmd_mandel_slice(const MandelArgs& a, const Globals& g) {
  const auto parts = split(a.grid, ':');
  Grid grid;
  json cfg = base_config("mandel-slice", g);
  cfg["grid"] = a.grid;
  if (a.map.empty()) {
    if (parts.size() != 4) throw UsageError("N=1 grid is re0:re1:im:steps");
    const int k = a.iters >= 0 ? a.iters : 50;
    grid = render_unicritical(a.d, parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]),
                              parse_int(parts[3]), k, resolved_threads(g));
    cfg["N"] = 1;
    cfg["d"] = a.d;
    cfg["iters"] = k;
  } else {
    if (parts.size() != 3) throw UsageError("N=2 grid is lo:hi:steps");
    const MinCritMap f = map_from_json(read_json_file(a.map));
    const int k = a.iters >= 0 ? a.iters : 3;
    grid = render_translation_plane(f, parse_double(parts[0]), parse_double(parts[1]), parse_int(parts[2]), k,
                                    resolved_threads(g));
    cfg["N"] = 2;
    cfg["d"] = f.d;
    cfg["A"] = map_to_json(f)["A"];
    cfg["iters"] = k;
  }
  const std::string prefix = g.out.empty() ? "mandel" : g.out;
  write_file(prefix + ".pgm", to_pgm(grid));
  write_file(prefix + ".csv", to_csv(grid));
  cfg["outputs"] = {prefix + ".pgm", prefix + ".csv"};
  std::cout << json{{"config", cfg}, {"width", grid.width}, {"height", grid.height}}.dump(2) << "\n";
  return 0;
}

struct PcfArgs {
  int d = 2;
  std::string range = "-4:4";
  long den_bound = 1;
  long max_height = -1;
  std::string map;
  int iters = -1;
};

int cmd_pcf_scan(const PcfArgs& a, const Globals& g) {
  const auto r = split(a.range, ':');
  if (r.size() != 2) throw UsageError("range is lo:hi");
  const mpq_class lo = parse_rational(r[0]), hi = parse_rational(r[1]);
  if (lo > hi) throw UsageError("range is empty");
  json cfg = base_config("pcf-scan", g);
  cfg["range"] = a.range;
  const int digits = resolved_digits(g);

  if (a.map.empty()) {
    mpz_class bound = abs(lo) > abs(hi) ? mpz_class(abs(lo) * a.den_bound) : mpz_class(abs(hi) * a.den_bound);
    const long H = a.max_height > 0 ? a.max_height : std::max(1L, bound.get_si());
    cfg["d"] = a.d;
    cfg["den_bound"] = a.den_bound;
    cfg["max_height"] = H;
    json hits = json::array();
    for (const auto& hit : pcf_scan(a.d, lo, hi, a.den_bound, H)) {
      json orbit = json::array();
      for (const auto& z : hit.report.orbit) orbit.push_back(z.get_str());
      hits.push_back({{"c", rational_string(hit.c)}, {"orbit", orbit}});
    }
    emit({{"config", cfg}, {"pcf", hits}}, g);
    return 0;
  }

  // N = 2: integral b (good reduction at every prime) inside the height
  // window of the main bounds, then screened by the truncated critical height.
  const MinCritMap f = map_from_json(read_json_file(a.map));
  if (f.N != 2) throw UsageError("the N=2 scan needs a map with N = 2");
  if (lo.get_den() != 1 || hi.get_den() != 1) throw UsageError("the N=2 scan ranges over integers");
  const int k = a.iters >= 0 ? a.iters : default_iterations(f);
  const int N = f.N, d = f.d;
  const Real hA = matrix_height(f.A);
  const Real window = (Real(N * (d * N + 1) - 1) / (N * d) * hA + main_bound_C1(N, d)) * d / (d - 1);
  cfg["map"] = map_to_json(f);
  cfg["iters"] = k;
  cfg["height_window"] = format_real(window, digits);
  json cands = json::array();
  for (long b1 = lo.get_num().get_si(); b1 <= hi.get_num().get_si(); ++b1)
    for (long b2 = lo.get_num().get_si(); b2 <= hi.get_num().get_si(); ++b2) {
      const MinCritMap fb = MinCritMap::make(d, f.A, {b1, b2});
      if (point_height(fb.b) > window) continue;
      const GlobalEstimate e = relative_critical_height(fb, k);
      if (e.value - e.error > real_slack()) continue;
      cands.push_back({{"b", {std::to_string(b1), std::to_string(b2)}},
                       {"value", format_real(e.value, digits)},
                       {"error", format_real(e.error, digits)}});
    }
  emit({{"config", cfg}, {"candidates", cands}}, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative escape rates and critical heights of A X^d + b"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--precision", g.precision, "printed significant digits (10..55; env RELESC_PRECISION)");
  app.add_option("--threads", g.threads, "worker threads (default: hardware)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "output path (prefix for mandel-slice)");

  EscapeArgs ea;
  auto* esc = app.add_subcommand("escape-rate", "truncated relative escape rate of a divisor");
  esc->add_option("--map", ea.map, "map JSON")->required();
  esc->add_option("--divisor", ea.divisor, "divisor form JSON");
  esc->add_option("--point", ea.point, "N=1 shorthand: the point [z]");
  esc->add_option("--place", ea.place, "inf or a prime");
  esc->add_option("--iters,-k", ea.iters, "iterations");
  esc->add_option("--mode", ea.mode, "auto, exact or scaled");

  CriticalArgs ca;
  auto* crit = app.add_subcommand("critical-height", "relative critical height with the main bounds");
  crit->add_option("--map", ca.map, "map JSON")->required();
  crit->add_option("--iters,-k", ca.iters, "iterations");
  crit->add_option("--places", ca.places, "auto or a comma-separated list");

  std::string gr_map;
  long gr_prime = 0;
  auto* gr = app.add_subcommand("good-reduction", "exit 0 good, 1 bad, 2 hypothesis not met");
  gr->add_option("--map", gr_map, "map JSON")->required();
  gr->add_option("--prime", gr_prime, "prime")->required();

  LemmaArgs la;
  auto* vl = app.add_subcommand("verify-lemmas", "randomized lemma suite");
  vl->add_option("--trials", la.trials, "trials");
  vl->add_option("--profile", la.profile, "profile JSON");
  vl->add_option("--lemma", la.lemmas, "comma-separated lemma ids");
  vl->add_option("--seed", g.seed, "random seed");

  MandelArgs ma;
  auto* ms = app.add_subcommand("mandel-slice", "CSV and PGM of the truncated critical escape rate");
  ms->add_option("--d", ma.d, "degree (N=1)");
  ms->add_option("--grid", ma.grid, "N=1: re0:re1:im:steps; N=2: lo:hi:steps");
  ms->add_option("--map", ma.map, "N=2: map JSON supplying A and d");
  ms->add_option("--iters,-k", ma.iters, "iterations");

  PcfArgs pa;
  auto* ps = app.add_subcommand("pcf-scan", "PCF parameters in a window");
  ps->add_option("--d", pa.d, "degree (N=1)");
  ps->add_option("--range", pa.range, "lo:hi");
  ps->add_option("--den-bound", pa.den_bound, "largest denominator");
  ps->add_option("--max-height", pa.max_height, "bound on max(|num|, den)");
  ps->add_option("--map", pa.map, "N=2: map JSON supplying A and d");
  ps->add_option("--iters,-k", pa.iters, "iterations for the N=2 screen");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*esc) return cmd_escape_rate(ea, g);
    if (*crit) return cmd_critical_height(ca, g);
    if (*gr) return cmd_good_reduction(gr_map, gr_prime, g);
    if (*vl) return cmd_verify_lemmas(la, g);
    if (*ms) return cmd_mandel_slice(ma, g);
    if (*ps) return cmd_pcf_scan(pa, g);
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
