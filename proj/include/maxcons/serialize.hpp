// Deterministic JSON forms of currents, Killing spinors, conserved tensors, decompositions and reports.
#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "maxcons/classify.hpp"
#include "maxcons/tensors.hpp"

namespace maxcons {

using Json = nlohmann::json;  // keys sorted, so dumps are byte-stable

// Raised on schema violations; the message starts with the JSON path of the offending node.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"rep": "spinor"|"tensor", "order": q, "components": {"00".."11" | "L".."MBAR": poly text}}
Json to_json(const Current& c);
Current current_from_json(const Json& j);
// Characteristic in the current schema with spinor keys.
Json characteristic_to_json(const SpinorField& q);

// {"type": [k, l], "components": {"a,b": poly text}}
Json to_json(const KillingSpinor& K);
KillingSpinor killing_from_json(const Json& j);

// {"kind": "T"|"Z"|"V", "n": n, "components": {"L,N,...": poly text}}, nonzero entries only.
Json to_json(const ConservedTensor& t);

// {"s":..,"p":..,"i":..,"j":..,"n":..,"np":..,"k":..,"m":..,"mp":..,"prime":..,"minus":..,"label":..}
Json label_to_json(const BasisLabel& l);
// {"terms": [{"family", "indices", "coeff"}], "residual_trivial": bool, "certificate": {...}}
Json to_json(const Decomposition& d);

Json to_json(const DimsReport& r);

// Signature, epsilon and volume conventions, and the basis normalizations.
Json conventions_block();
// {"command", "inputs_digest", "conventions", "results"}; digest is FNV-1a 64 of the inputs text.
Json make_report(const std::string& command, const std::string& inputs, Json results);
std::string fnv1a_hex(const std::string& text);

}  // namespace maxcons
