#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "stagebench/plant.hpp"
#include "stagebench/sensors.hpp"
#include "stagebench/servo.hpp"
#include "stagebench/timeseries.hpp"
#include "stagebench/trajectory.hpp"

namespace stagebench::harness {

/// Everything one closed-loop run needs. The profile sample rate doubles as
/// the control/measurement rate; the plant integrates at sim_dt_s, an integer
/// number of substeps per control period. Sensor noise seeds left at 0 are
/// derived from `seed` with fixed per-channel salts.
struct StageScenario {
    trajectory::SineProfile profile;
    plant::StageParams plant;
    plant::FrictionParams friction;
    servo::ServoConfig servo;
    sensors::EncoderModel encoder;
    sensors::VibrometerModel vibrometer;
    std::optional<sensors::DutModel> dut;
    double sim_dt_s = 1e-5;
    std::uint64_t seed = 1;
    int settle_periods = 2;

    void validate() const;  // throws std::invalid_argument

    /// Copy with per-channel noise seeds resolved from `seed`.
    StageScenario resolved() const;

    std::size_t control_steps_per_period() const;
    std::size_t capture_samples() const;
    std::size_t substeps_per_control_step() const;
};

/// Multi-channel log of one run, all channels on the control-rate grid over
/// the captured (post-settling) window.
struct RunRecord {
    TimeSeries ref_pos_m;
    TimeSeries true_pos_m;
    TimeSeries enc_pos_m;
    TimeSeries ldv_vel_mps;
    TimeSeries dut_out;
    TimeSeries force_N;
    std::string fingerprint;
    bool stroke_contact = false;
};

/// FNV-1a 64 over the canonical config text (seed included), hex encoded.
std::string scenario_fingerprint(const StageScenario& s);

}  // namespace stagebench::harness
