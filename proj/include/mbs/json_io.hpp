#pragma once

#include <json.hpp>
#include <string>

#include "mbs/classifier.hpp"
#include "mbs/fock_core.hpp"
#include "mbs/local_operator.hpp"
#include "mbs/mode_tensor.hpp"

namespace mbs {

using json = nlohmann::ordered_json;

// Complex numbers travel as [re, im]; bare numbers are accepted on input.
json complex_to_json(Complex z);
Complex complex_from_json(const json& j, const std::string& location);

// Input document:
// {"modes": int, "cutoff": int|"auto", "tolerance": num, "input":
//  {"type": "number"|"cat"|"hybrid", "coefficients": [...], "terms":
//   [{"weight": [re,im], "alpha": [re,im]}, ...]}}
// Structural problems raise SchemaError with a JSON-pointer location;
// value-domain problems raise InvariantError.
InputSpec parse_input_spec(const json& doc);

json certificate_to_json(const IloCertificate& cert);
IloCertificate certificate_from_json(const json& doc);

// Row-major amplitude dump of a built state.
json state_to_json(const ModeTensor& state, const std::vector<std::string>& warnings);

// Full classification report; `input_echo` is embedded so the report is
// self-contained for later verification.
json report_to_json(const ClassificationReport& report, const json& input_echo);

json label_to_json(const ClassLabel& label);
ClassLabel label_from_json(const json& doc);

json hierarchy_to_json(const HierarchyChain& chain);

std::string ranks_to_csv(const ClassificationReport& report);
std::string report_to_text(const ClassificationReport& report);
std::string hierarchy_to_text(const HierarchyChain& chain);

} // namespace mbs
