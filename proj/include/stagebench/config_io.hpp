#pragma once

#include <optional>
#include <string>

#include "stagebench/ilc.hpp"
#include "stagebench/scenario.hpp"

namespace stagebench::harness {

/// Scenario files are flat sectioned key = value text: one key per line,
/// '#' starts a comment, sections are [profile] [plant] [friction] [servo]
/// [encoder] [vibrometer] [dut] [sim] [ilc]. Unknown sections or keys are
/// rejected. The [dut] section is optional; [ilc] is only consumed by the
/// ilc subcommand. The full schema is documented in the README.
StageScenario scenario_from_config(const std::string& text);
StageScenario load_scenario_file(const std::string& path);

/// Canonical serialization (fixed key order, 17 significant digits);
/// also the byte stream the scenario fingerprint is computed over.
std::string scenario_to_config(const StageScenario& s);

std::optional<servo::IlcConfig> ilc_from_config(const std::string& text);
std::string ilc_to_config(const servo::IlcConfig& cfg);

}  // namespace stagebench::harness
