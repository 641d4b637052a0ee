#pragma once

// JSON encodings of forms, maps and estimates. Numbers travel as decimal
// strings so nothing passes through binary floating point.

#include <json.hpp>
#include <string>

#include "relesc/heights.hpp"

namespace relesc {

using json = nlohmann::ordered_json;

/// "p/q", "-7" or a JSON integer.
mpq_class parse_rational(const json& j);
mpq_class parse_rational(const std::string& s);
std::string rational_string(const mpq_class& q);

json form_to_json(const Form& f);
json form_to_json(const IntForm& f);
Form form_from_json(const json& j);

json map_to_json(const MinCritMap& f);
MinCritMap map_from_json(const json& j);

json estimate_to_json(const Estimate& e, int digits);
json global_estimate_to_json(const GlobalEstimate& g, int digits);

json read_json_file(const std::string& path);

}  // namespace relesc
