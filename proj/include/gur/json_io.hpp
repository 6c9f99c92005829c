#pragma once

// vendored single-header nlohmann/json
#include "json.hpp"

#include "gur/state.hpp"

namespace gur {

// Matrices serialize as {"dim": n, "entries": [[re, im], ...]} row-major.
nlohmann::json matrix_to_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const QuantumState& s);
QuantumState state_from_json(const nlohmann::json& j);

nlohmann::json gemenge_to_json(const Gemenge& g);
Gemenge gemenge_from_json(const nlohmann::json& j);

// target serializes as a subsystem index or "global".
nlohmann::json outcome_to_json(const Outcome& o);
Outcome outcome_from_json(const nlohmann::json& j);

}  // namespace gur
