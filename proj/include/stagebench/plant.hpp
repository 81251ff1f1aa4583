#pragma once

namespace stagebench::plant {

/// Single-axis air-bearing stage: rigid moving mass, force actuator, viscous
/// damping, elastic drag of the air tubing and cable carrier (linear spring to
/// ground), and hard stops at +/- stroke_limit_m.
struct StageParams {
    double moving_mass_kg = 3.0;
    double viscous_damping_N_s_per_m = 2.0;
    double cable_stiffness_N_per_m = 50.0;
    double stroke_limit_m = 0.05;  // half travel
    double max_force_N = 100.0;

    void validate() const;
};

/// Karnopp stick-slip friction with a Stribeck slip curve.
/// stick_band_mps is the zero-velocity band in which the stage can latch.
/// breakaway_N == 0 disables friction entirely.
struct FrictionParams {
    double coulomb_N = 0.0;
    double breakaway_N = 0.0;
    double stribeck_velocity_mps = 1e-3;
    double stick_band_mps = 2e-5;

    void validate() const;
    bool disabled() const { return breakaway_N == 0.0; }
};

struct StageState {
    double position_m = 0.0;
    double velocity_mps = 0.0;
    bool stuck = false;
};

/// Friction reaction force:
///  - |v| < stick band: -f_applied while |f_applied| <= breakaway (perfect stick),
///    else -breakaway * sign(f_applied) (breakaway clamp);
///  - otherwise -sign(v) * (Fc + (Fs - Fc) * exp(-(|v|/vs)^2)).
double friction_force(double velocity_mps, double applied_force_N, const FrictionParams& p);

/// Largest step the fixed-step integrator accepts.
inline constexpr double kMaxStableDt = 1e-4;

/// One semi-implicit Euler step of m*x'' = f_motor + friction - c*x' - k*x.
/// The motor force is clamped to +/- max_force_N; position is clamped to the
/// stroke limit with the velocity zeroed at the stop. While stuck, velocity is
/// exactly zero and position does not move. If hit_stop is non-null it is set
/// to true when the step ends on a hard stop.
StageState step_dynamics(const StageState& s, double motor_force_N, const StageParams& params,
                         const FrictionParams& fric, double dt_s, bool* hit_stop = nullptr);

/// Net acceleration at the given state with the given (unclamped) motor force.
/// Matches the force balance used by step_dynamics; zero while the stage sticks.
double net_acceleration(const StageState& s, double motor_force_N, const StageParams& params,
                        const FrictionParams& fric);

}  // namespace stagebench::plant
