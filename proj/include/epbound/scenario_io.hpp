#pragma once

#include <stdexcept>
#include <string>

#include "epbound/scenario.hpp"

namespace epbound {

// Parse/validation failure with a path-like location in the message
// (e.g. "$.coordinates[0].atoms[1]: unknown key 'weight'").
class ScenarioParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Scenario file format, one JSON object with a `kind` discriminator:
//   general:     coordinates (list of {atoms: [{value, prob}]}) and functions
//                (m x n nested lists of per-atom values aligned with atom order)
//   rademacher:  zeta (m x n matrix) and optional coordinates
//                (default: symmetric +-1 signs)
//   set_indexed: space_size, coordinate_probs (n vectors), sets (0-based indices)
// Unknown keys are rejected.
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical dump in `general` form; round-trips through scenario_from_json.
std::string scenario_to_json(const Scenario& s);

} // namespace epbound
