#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stagebench/ilc.hpp"
#include "stagebench/scenario.hpp"

namespace stagebench::harness {

/// Closed-loop run: plant at sim_dt, servo and sensors at the control rate,
/// first settle_periods periods discarded, then the profile's whole-period
/// capture window recorded. An optional feedforward force (one capture window
/// long) is applied cyclically on top of the servo output.
RunRecord simulate(const StageScenario& scenario,
                   const TimeSeries* feedforward_force = nullptr);

enum class Preset { fig2a_untuned, fig2b_tuned, fig3_ilc };

Preset preset_from_name(const std::string& name);  // throws, listing valid names
const std::vector<std::string>& preset_names();

/// Shipped calibrated scenarios: a high-stiction conservatively tuned stage,
/// the same stage after drag reduction and servo optimization, and the
/// optimized stage refined by iterative learning control.
StageScenario preset_scenario(Preset p);
servo::IlcConfig preset_ilc_config();

struct PresetRun {
    RunRecord record;
    std::optional<servo::IlcHistory> ilc_history;  // fig3_ilc only
};

PresetRun run_preset(Preset p);

}  // namespace stagebench::harness
