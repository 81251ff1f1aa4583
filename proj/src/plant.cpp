#include "stagebench/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stagebench::plant {

void StageParams::validate() const {
    if (!(moving_mass_kg > 0.0)) throw std::invalid_argument("plant: mass must be > 0");
    if (!(viscous_damping_N_s_per_m >= 0.0))
        throw std::invalid_argument("plant: viscous damping must be >= 0");
    if (!(cable_stiffness_N_per_m >= 0.0))
        throw std::invalid_argument("plant: cable stiffness must be >= 0");
    if (!(stroke_limit_m > 0.0)) throw std::invalid_argument("plant: stroke limit must be > 0");
    if (!(max_force_N > 0.0)) throw std::invalid_argument("plant: max force must be > 0");
}

void FrictionParams::validate() const {
    if (!(coulomb_N >= 0.0)) throw std::invalid_argument("friction: coulomb level must be >= 0");
    if (!(breakaway_N >= coulomb_N))
        throw std::invalid_argument("friction: breakaway must be >= coulomb level");
    if (!(stribeck_velocity_mps > 0.0))
        throw std::invalid_argument("friction: stribeck velocity must be > 0");
    if (!(stick_band_mps > 0.0))
        throw std::invalid_argument("friction: stick band must be > 0");
}

namespace {

double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

double stribeck_level(double speed, const FrictionParams& p) {
    const double r = speed / p.stribeck_velocity_mps;
    return p.coulomb_N + (p.breakaway_N - p.coulomb_N) * std::exp(-r * r);
}

}  // namespace

double friction_force(double velocity_mps, double applied_force_N, const FrictionParams& p) {
    if (p.disabled()) return 0.0;
    if (std::fabs(velocity_mps) < p.stick_band_mps) {
        if (std::fabs(applied_force_N) <= p.breakaway_N) return -applied_force_N;
        return -p.breakaway_N * sign(applied_force_N);
    }
    return -sign(velocity_mps) * stribeck_level(std::fabs(velocity_mps), p);
}

StageState step_dynamics(const StageState& s, double motor_force_N, const StageParams& params,
                         const FrictionParams& fric, double dt_s, bool* hit_stop) {
    if (!(dt_s > 0.0) || dt_s > kMaxStableDt)
        throw std::invalid_argument("step_dynamics: dt must be in (0, 1e-4] s");

    const double f_motor =
        std::clamp(motor_force_N, -params.max_force_N, params.max_force_N);
    const double k = params.cable_stiffness_N_per_m;
    const double c = params.viscous_damping_N_s_per_m;

    StageState next = s;

    // Karnopp mode decision: inside the zero-velocity band the stage latches
    // unless the applied force exceeds the breakaway level.
    const bool in_band = !fric.disabled() && std::fabs(s.velocity_mps) < fric.stick_band_mps;
    if (in_band) {
        const double f_applied = f_motor - k * s.position_m;  // v treated as zero
        if (std::fabs(f_applied) <= fric.breakaway_N) {
            next.velocity_mps = 0.0;
            next.stuck = true;
            if (hit_stop) *hit_stop = false;
            return next;
        }
    }

    const double f_fric = friction_force(s.velocity_mps, f_motor - k * s.position_m, fric);
    const double accel =
        (f_motor + f_fric - c * s.velocity_mps - k * s.position_m) / params.moving_mass_kg;

    // semi-implicit Euler: velocity first, then position with the new velocity
    next.velocity_mps = s.velocity_mps + accel * dt_s;
    next.position_m = s.position_m + next.velocity_mps * dt_s;
    next.stuck = false;

    bool stopped = false;
    if (next.position_m > params.stroke_limit_m) {
        next.position_m = params.stroke_limit_m;
        next.velocity_mps = 0.0;
        stopped = true;
    } else if (next.position_m < -params.stroke_limit_m) {
        next.position_m = -params.stroke_limit_m;
        next.velocity_mps = 0.0;
        stopped = true;
    }
    if (hit_stop) *hit_stop = stopped;
    return next;
}

double net_acceleration(const StageState& s, double motor_force_N, const StageParams& params,
                        const FrictionParams& fric) {
    const double f_motor =
        std::clamp(motor_force_N, -params.max_force_N, params.max_force_N);
    const double k = params.cable_stiffness_N_per_m;
    const double c = params.viscous_damping_N_s_per_m;

    const bool in_band = !fric.disabled() && std::fabs(s.velocity_mps) < fric.stick_band_mps;
    if (in_band && std::fabs(f_motor - k * s.position_m) <= fric.breakaway_N) return 0.0;

    const double f_fric = friction_force(s.velocity_mps, f_motor - k * s.position_m, fric);
    return (f_motor + f_fric - c * s.velocity_mps - k * s.position_m) / params.moving_mass_kg;
}

}  // namespace stagebench::plant
