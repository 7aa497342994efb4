#pragma once

#include <string>

#include "uwmac/scenario.hpp"

namespace uwmac::cfg {

// Parses and validates a scenario. Unknown keys are rejected so typos never
// silently fall back to defaults. Throws ConfigError with field-level
// diagnostics.
ScenarioConfig from_json_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Serializes the fully-resolved scenario (all defaults applied) as a single
// JSON line; this is what result files echo so any CSV is reproducible from
// its own header block.
std::string to_json_text(const ScenarioConfig& cfg);

}  // namespace uwmac::cfg
