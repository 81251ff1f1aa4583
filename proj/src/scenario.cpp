#include "stagebench/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace stagebench::harness {

namespace {
// per-channel salts for deriving sensor noise seeds from the run seed
constexpr std::uint64_t kEncoderSalt = 0x01;
constexpr std::uint64_t kVibrometerSalt = 0x02;
constexpr std::uint64_t kDutSalt = 0x03;
}  // namespace

void StageScenario::validate() const {
    profile.validate();
    plant.validate();
    friction.validate();
    servo.validate();
    encoder.validate();
    vibrometer.validate();
    if (dut) dut->validate();

    if (profile.sample_rate_hz != servo.control_rate_hz)
        throw std::invalid_argument(
            "scenario: profile sample rate must equal the servo control rate");

    if (profile.amplitude_m + std::fabs(profile.offset_m) > plant.stroke_limit_m)
        throw std::invalid_argument("profile exceeds stroke");

    if (!(sim_dt_s > 0.0) || sim_dt_s > plant::kMaxStableDt)
        throw std::invalid_argument("scenario: sim_dt must be in (0, 1e-4] s");

    const double control_dt = 1.0 / servo.control_rate_hz;
    const double decim = control_dt / sim_dt_s;
    if (std::fabs(decim - std::round(decim)) > 1e-9 * decim || decim < 1.0 - 1e-9)
        throw std::invalid_argument(
            "scenario: control period must be a whole number of sim steps");

    if (settle_periods < 0)
        throw std::invalid_argument("scenario: settle_periods must be >= 0");
    const double settle_samples =
        static_cast<double>(settle_periods) * servo.control_rate_hz / profile.frequency_hz;
    if (std::fabs(settle_samples - std::round(settle_samples)) > 1e-6)
        throw std::invalid_argument(
            "scenario: settling span must be a whole number of control steps");
}

StageScenario StageScenario::resolved() const {
    StageScenario s = *this;
    if (s.encoder.noise.seed == 0) s.encoder.noise.seed = mix_seed(seed, kEncoderSalt);
    if (s.vibrometer.noise.seed == 0) s.vibrometer.noise.seed = mix_seed(seed, kVibrometerSalt);
    if (s.dut && s.dut->noise.seed == 0) s.dut->noise.seed = mix_seed(seed, kDutSalt);
    return s;
}

std::size_t StageScenario::control_steps_per_period() const {
    return static_cast<std::size_t>(
        std::llround(servo.control_rate_hz / profile.frequency_hz));
}

std::size_t StageScenario::capture_samples() const { return profile.sample_count(); }

std::size_t StageScenario::substeps_per_control_step() const {
    return static_cast<std::size_t>(std::llround(1.0 / (servo.control_rate_hz * sim_dt_s)));
}

}  // namespace stagebench::harness
