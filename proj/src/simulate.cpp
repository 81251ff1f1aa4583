#include "stagebench/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stagebench::harness {

RunRecord simulate(const StageScenario& scenario, const TimeSeries* feedforward_force) {
    scenario.validate();
    const StageScenario s = scenario.resolved();

    const double rate = s.servo.control_rate_hz;
    const double control_dt = 1.0 / rate;
    const std::size_t n_capture = s.capture_samples();
    const std::size_t n_settle =
        static_cast<std::size_t>(s.settle_periods) * s.control_steps_per_period();
    const std::size_t substeps = s.substeps_per_control_step();

    if (feedforward_force) {
        if (feedforward_force->size() != n_capture ||
            feedforward_force->sample_rate_hz != rate)
            throw std::invalid_argument(
                "simulate: feedforward batch must match the capture window");
        if (feedforward_force->unit != Unit::newton)
            throw std::invalid_argument("simulate: feedforward must be a force channel [N]");
    }

    GaussianStream enc_noise(s.encoder.noise);
    sensors::VibrometerState ldv(s.vibrometer, rate);
    std::optional<sensors::DutState> dut;
    if (s.dut) dut.emplace(*s.dut, rate);

    plant::StageState state;
    servo::ServoState servo_state;

    std::vector<double> ref_pos(n_capture), true_pos(n_capture), enc_pos(n_capture),
        ldv_vel(n_capture), dut_out(n_capture, 0.0), force(n_capture);
    bool contact = false;

    const std::size_t total = n_settle + n_capture;
    for (std::size_t j = 0; j < total; ++j) {
        const double t = static_cast<double>(j) / rate;
        const double ref_p = s.profile.position_at(t);
        const double ref_a = s.profile.acceleration_at(t);

        const double enc = sensors::encoder_read(state.position_m, s.encoder, enc_noise.next());
        double f_cmd = servo::servo_step(ref_p, ref_a, enc, servo_state, s.servo, control_dt);
        if (feedforward_force) f_cmd += feedforward_force->samples[j % n_capture];

        const double f_applied = std::clamp(f_cmd, -s.plant.max_force_N, s.plant.max_force_N);
        const double acc = plant::net_acceleration(state, f_cmd, s.plant, s.friction);
        const double ldv_v = ldv.step(state.velocity_mps);
        const double dut_v = dut ? dut->step(acc) : 0.0;

        if (j >= n_settle) {
            const std::size_t i = j - n_settle;
            ref_pos[i] = ref_p;
            true_pos[i] = state.position_m;
            enc_pos[i] = enc;
            ldv_vel[i] = ldv_v;
            dut_out[i] = dut_v;
            force[i] = f_applied;
        }

        for (std::size_t sub = 0; sub < substeps; ++sub) {
            bool hit = false;
            state = plant::step_dynamics(state, f_cmd, s.plant, s.friction, s.sim_dt_s, &hit);
            contact = contact || hit;
        }
    }

    const double t0 = static_cast<double>(n_settle) / rate;
    RunRecord rec;
    rec.ref_pos_m = TimeSeries{rate, std::move(ref_pos), Unit::meter, t0};
    rec.true_pos_m = TimeSeries{rate, std::move(true_pos), Unit::meter, t0};
    rec.enc_pos_m = TimeSeries{rate, std::move(enc_pos), Unit::meter, t0};
    rec.ldv_vel_mps = TimeSeries{rate, std::move(ldv_vel), Unit::meter_per_s, t0};
    rec.dut_out = TimeSeries{rate, std::move(dut_out),
                             s.dut ? s.dut->output_unit() : Unit::dimensionless, t0};
    rec.force_N = TimeSeries{rate, std::move(force), Unit::newton, t0};
    rec.fingerprint = scenario_fingerprint(scenario);
    rec.stroke_contact = contact;
    return rec;
}

PresetRun run_preset(Preset p) {
    PresetRun out;
    if (p == Preset::fig3_ilc) {
        const StageScenario scenario = preset_scenario(p);
        const servo::IlcConfig cfg = preset_ilc_config();
        servo::IlcHistory history = servo::ilc_train(scenario, cfg);
        out.record = simulate(scenario, &history.back().command);
        out.ilc_history = std::move(history);
    } else {
        out.record = simulate(preset_scenario(p));
    }
    return out;
}

}  // namespace stagebench::harness
