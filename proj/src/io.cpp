#include "relesc/io.hpp"

#include <fstream>

#include "relesc/errors.hpp"

namespace relesc {

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  std::string t = s;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty() || q.set_str(t, 10) != 0) throw UsageError("not a rational number: '" + s + "'");
  if (q.get_den() == 0) throw UsageError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

mpq_class parse_rational(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return mpq_class(std::to_string(j.get<long long>()));
  throw UsageError("expected a rational as a string or integer, got " + j.dump());
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

namespace {

template <class C>
json form_json(const BasicForm<C>& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json e = json::array();
    for (int i = 0; i < f.num_vars(); ++i) e.push_back(t.mono.exponent(i));
    terms.push_back({{"exps", e}, {"coeff", t.coeff.get_str()}});
  }
  return {{"vars", f.num_vars()}, {"terms", terms}};
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json form_to_json(const Form& f) { return form_json(f); }
json form_to_json(const IntForm& f) { return form_json(f); }

Form form_from_json(const json& j) {
  const int vars = field(j, "vars").get<int>();
  const json& terms = field(j, "terms");
  if (!terms.is_array() || terms.empty()) throw UsageError("a form needs at least one term");
  std::vector<std::pair<std::vector<int>, mpq_class>> pairs;
  int degree = -1;
  for (const auto& t : terms) {
    std::vector<int> exps = field(t, "exps").get<std::vector<int>>();
    int sum = 0;
    for (int e : exps) {
      if (e < 0) throw UsageError("negative exponent");
      sum += e;
    }
    if (degree < 0) degree = sum;
    if (sum != degree) throw UsageError("form is not homogeneous: exponent sums differ");
    pairs.emplace_back(std::move(exps), parse_rational(field(t, "coeff")));
  }
  return Form::from_terms(vars, degree, pairs);
}

json map_to_json(const MinCritMap& f) {
  json A = json::array();
  for (const auto& row : f.A) {
    json r = json::array();
    for (const auto& x : row) r.push_back(rational_string(x));
    A.push_back(r);
  }
  json b = json::array();
  for (const auto& x : f.b) b.push_back(rational_string(x));
  return {{"N", f.N}, {"d", f.d}, {"A", A}, {"b", b}};
}

MinCritMap map_from_json(const json& j) {
  const int N = field(j, "N").get<int>();
  const int d = field(j, "d").get<int>();
  const json& ja = field(j, "A");
  const json& jb = field(j, "b");
  if (!ja.is_array() || static_cast<int>(ja.size()) != N) throw UsageError("A must have N rows");
  if (!jb.is_array() || static_cast<int>(jb.size()) != N) throw UsageError("b must have N entries");
  QMatrix A;
  for (const auto& row : ja) {
    if (!row.is_array() || static_cast<int>(row.size()) != N) throw UsageError("A must be N x N");
    QVector r;
    for (const auto& x : row) r.push_back(parse_rational(x));
    A.push_back(std::move(r));
  }
  QVector b;
  for (const auto& x : jb) b.push_back(parse_rational(x));
  return MinCritMap::make(d, std::move(A), std::move(b));
}

json estimate_to_json(const Estimate& e, int digits) {
  json j = {{"value", format_real(e.value.to_real(), digits)},
            {"error", format_real(e.error.to_real(), digits)},
            {"k", e.k},
            {"place", e.place.name()}};
  if (!e.place.is_archimedean()) {
    j["value_log_p_multiple"] = rational_string(e.value.log_p_multiple());
    j["error_log_p_multiple"] = rational_string(e.error.log_p_multiple());
  }
  return j;
}

json global_estimate_to_json(const GlobalEstimate& g, int digits) {
  json places = json::array();
  for (const Place v : g.places) places.push_back(v.name());
  json j = {{"value", format_real(g.value, digits)},
            {"error", format_real(g.error, digits)},
            {"k", g.k},
            {"places", places}};
  if (g.fell_back) j["warning"] = g.warning;
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw UsageError("malformed JSON in '" + path + "': " + ex.what());
  }
}

}  // namespace relesc
