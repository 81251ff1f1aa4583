#include "stagebench/servo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stagebench::servo {

void ServoConfig::validate() const {
    if (!(kp >= 0.0) || !(ki >= 0.0) || !(kd >= 0.0) || !(accel_ff >= 0.0))
        throw std::invalid_argument("servo: gains must be >= 0");
    if (!(control_rate_hz > 0.0))
        throw std::invalid_argument("servo: control rate must be > 0");
    if (!(output_limit_N > 0.0))
        throw std::invalid_argument("servo: output limit must be > 0");
}

double servo_step(double ref_pos_m, double ref_acc_mps2, double meas_pos_m, ServoState& state,
                  const ServoConfig& cfg, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("servo_step: dt must be > 0");

    const double e = ref_pos_m - meas_pos_m;
    const double deriv = state.has_prev ? (e - state.prev_error) / dt_s : 0.0;

    double integral = state.integral + e * dt_s;
    if (cfg.ki > 0.0) {
        const double bound = cfg.output_limit_N / cfg.ki;
        integral = std::clamp(integral, -bound, bound);
    }

    const double u = cfg.kp * e + cfg.ki * integral + cfg.kd * deriv + cfg.accel_ff * ref_acc_mps2;

    double out = u;
    if (std::fabs(u) > cfg.output_limit_N) {
        out = std::clamp(u, -cfg.output_limit_N, cfg.output_limit_N);
        // anti-windup: discard this step's integration while saturated
    } else {
        state.integral = integral;
    }
    state.prev_error = e;
    state.has_prev = true;
    return out;
}

}  // namespace stagebench::servo
