#pragma once

namespace stagebench::servo {

/// Position-loop PID with acceleration feedforward. Gains are in force units:
/// kp [N/m], ki [N/(m s)], kd [N s/m], accel_ff [N/(m/s^2)].
struct ServoConfig {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double accel_ff = 0.0;
    double control_rate_hz = 10000.0;
    double output_limit_N = 100.0;

    void validate() const;
};

struct ServoState {
    double integral = 0.0;   // integral of position error, m*s
    double prev_error = 0.0;
    bool has_prev = false;
};

/// One control update. Derivative is a first difference on the error; the
/// integrator is held while the output saturates and is additionally bounded
/// so the integral term alone never exceeds the output limit.
double servo_step(double ref_pos_m, double ref_acc_mps2, double meas_pos_m, ServoState& state,
                  const ServoConfig& cfg, double dt_s);

}  // namespace stagebench::servo
