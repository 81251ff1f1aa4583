#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stagebench/ilc.hpp"
#include "stagebench/servo.hpp"
#include "stagebench/simulate.hpp"

using namespace stagebench;
using namespace stagebench::servo;

namespace {

TimeSeries sine_series(double rate, std::size_t n, double f, double amp, Unit unit,
                       double phase = 0.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amp * std::sin(2.0 * M_PI * f * static_cast<double>(i) / rate + phase);
    return TimeSeries{rate, std::move(v), unit, 0.0};
}

}  // namespace

TEST_CASE("zero error and zero feedforward give zero force") {
    ServoConfig cfg{1e6, 1e4, 100.0, 3.0, 10000.0, 50.0};
    ServoState st;
    for (int i = 0; i < 100; ++i)
        CHECK(servo_step(1e-3, 0.0, 1e-3, st, cfg, 1e-4) == 0.0);
}

TEST_CASE("pure proportional gain") {
    ServoConfig cfg{1e6, 0.0, 0.0, 0.0, 10000.0, 50.0};
    ServoState st;
    CHECK(servo_step(1e-6, 0.0, 0.0, st, cfg, 1e-4) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("saturation clamps the output and freezes the integrator") {
    ServoConfig cfg{1e6, 1e5, 0.0, 0.0, 10000.0, 1.0};
    ServoState st;
    // kp * e = 10 * output limit
    const double f = servo_step(1e-5, 0.0, 0.0, st, cfg, 1e-4);
    CHECK(f == 1.0);
    CHECK(st.integral == 0.0);
    const double f2 = servo_step(1e-5, 0.0, 0.0, st, cfg, 1e-4);
    CHECK(f2 == 1.0);
    CHECK(st.integral == 0.0);
}

TEST_CASE("integral term is bounded by the output limit") {
    ServoConfig cfg{0.0, 1e4, 0.0, 0.0, 10000.0, 2.0};
    ServoState st;
    for (int i = 0; i < 100000; ++i) servo_step(1e-3, 0.0, 0.0, st, cfg, 1e-4);
    CHECK(std::fabs(st.integral) <= cfg.output_limit_N / cfg.ki + 1e-15);
}

TEST_CASE("acceleration feedforward adds through") {
    ServoConfig cfg{0.0, 0.0, 0.0, 3.0, 10000.0, 50.0};
    ServoState st;
    CHECK(servo_step(0.0, 2.0, 0.0, st, cfg, 1e-4) == doctest::Approx(6.0));
}

TEST_CASE("derivative acts on the error first difference") {
    ServoConfig cfg{0.0, 0.0, 10.0, 0.0, 10000.0, 500.0};
    ServoState st;
    CHECK(servo_step(1e-3, 0.0, 0.0, st, cfg, 1e-4) == 0.0);  // no history yet
    const double f = servo_step(2e-3, 0.0, 0.0, st, cfg, 1e-4);
    CHECK(f == doctest::Approx(10.0 * (1e-3 / 1e-4)).epsilon(1e-12));
}

TEST_CASE("zero-phase low-pass passes kept bins exactly and removes the rest") {
    const double rate = 12000.0;
    const std::size_t n = 1200;
    auto low = sine_series(rate, n, 120.0, 1.0, Unit::newton, 0.3);
    auto high = sine_series(rate, n, 2400.0, 0.5, Unit::newton, 1.1);
    TimeSeries both = low;
    for (std::size_t i = 0; i < n; ++i) both.samples[i] += high.samples[i] + 0.25;

    const auto out = zero_phase_lowpass(both, 500.0);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(out.samples[i] == doctest::Approx(low.samples[i] + 0.25).epsilon(1e-10).scale(1.0));
}

TEST_CASE("learning update is a fixed point on zero error") {
    const double rate = 12000.0;
    const std::size_t n = 1000;
    const auto u = sine_series(rate, n, 12.0, 2.5, Unit::newton, 0.7);
    const TimeSeries e{rate, std::vector<double>(n, 0.0), Unit::meter, 0.0};

    IlcConfig cfg;
    cfg.learning_gain = 1.0;
    cfg.lead_samples = 0;
    cfg.q_cutoff_hz = 5000.0;  // far above the signal band
    cfg.max_iterations = 1;
    cfg.plant_gain_estimate_N_per_m = 1e6;

    const auto u2 = ilc_update(u, e, cfg, cfg.plant_gain_estimate_N_per_m);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::fabs(u2.samples[i] - u.samples[i]) <= 1e-9 * 2.5);
}

TEST_CASE("static unit-gain plant is inverted in one update") {
    // plant: e = e0 - u / g with g = 1 N/m
    const double rate = 12000.0;
    const std::size_t n = 1000;
    const auto e0 = sine_series(rate, n, 12.0, 1e-6, Unit::meter, 0.2);
    TimeSeries u{rate, std::vector<double>(n, 0.0), Unit::newton, 0.0};

    IlcConfig cfg;
    cfg.learning_gain = 1.0;
    cfg.lead_samples = 0;
    cfg.q_cutoff_hz = 5000.0;
    cfg.plant_gain_estimate_N_per_m = 1.0;

    const auto u1 = ilc_update(u, e0, cfg, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double err = e0.samples[i] - u1.samples[i] / 1.0;
        CHECK(std::fabs(err) <= 1e-12 * 1e-6 + 1e-18);
    }
}

TEST_CASE("lifted-domain contraction at half the true inverse gain") {
    // plant: e = e0 - u / g; estimate g' = g/2 with L = 1 contracts by exactly 1/2
    const double rate = 12000.0;
    const std::size_t n = 1000;
    const double g = 2e6;
    const auto e0 = sine_series(rate, n, 12.0, 1e-6, Unit::meter);

    IlcConfig cfg;
    cfg.learning_gain = 1.0;
    cfg.lead_samples = 0;
    cfg.q_cutoff_hz = 5000.0;
    cfg.plant_gain_estimate_N_per_m = g / 2.0;

    TimeSeries u{rate, std::vector<double>(n, 0.0), Unit::newton, 0.0};
    TimeSeries e = e0;
    double prev = rms(e);
    for (int k = 0; k < 10; ++k) {
        u = ilc_update(u, e, cfg, cfg.plant_gain_estimate_N_per_m);
        for (std::size_t i = 0; i < n; ++i) e.samples[i] = e0.samples[i] - u.samples[i] / g;
        const double now = rms(e);
        CHECK(now / prev == doctest::Approx(0.5).epsilon(1e-6));
        prev = now;
    }
}

TEST_CASE("learning update rejects malformed batches") {
    const auto u = sine_series(1000.0, 100, 10.0, 1.0, Unit::newton);
    const auto e_short = sine_series(1000.0, 99, 10.0, 1.0, Unit::meter);
    const auto e_wrong_unit = sine_series(1000.0, 100, 10.0, 1.0, Unit::volt);
    IlcConfig cfg;
    cfg.q_cutoff_hz = 400.0;
    cfg.plant_gain_estimate_N_per_m = 1.0;
    CHECK_THROWS_AS(ilc_update(u, e_short, cfg, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ilc_update(u, e_wrong_unit, cfg, 1.0), std::invalid_argument);
    IlcConfig bad = cfg;
    bad.learning_gain = 2.5;
    const auto e = sine_series(1000.0, 100, 10.0, 1.0, Unit::meter);
    CHECK_THROWS_AS(ilc_update(u, e, bad, 1.0), std::invalid_argument);
    bad = cfg;
    bad.q_cutoff_hz = 600.0;  // at Nyquist
    CHECK_THROWS_AS(ilc_update(u, e, bad, 1.0), std::invalid_argument);
}

namespace {

harness::StageScenario quick_scenario() {
    auto s = harness::preset_scenario(harness::Preset::fig2b_tuned);
    s.profile.duration_s = 2.0 / 12.0;  // short batches keep this suite fast
    s.settle_periods = 4;
    s.servo.ki = 0.0;  // nothing slow to settle
    return s;
}

}  // namespace

TEST_CASE("zero learning gain changes nothing across iterations") {
    auto scenario = quick_scenario();
    auto cfg = harness::preset_ilc_config();
    cfg.learning_gain = 0.0;
    cfg.max_iterations = 3;
    const auto history = ilc_train(scenario, cfg);
    REQUIRE(history.size() == 3);
    CHECK(history[1].rms_error_m == history[0].rms_error_m);
    CHECK(history[2].rms_error_m == history[0].rms_error_m);
}

TEST_CASE("an unreachable stop threshold runs every iteration") {
    auto scenario = quick_scenario();
    auto cfg = harness::preset_ilc_config();
    cfg.max_iterations = 5;
    cfg.stop_rms_m = 0.0;  // never reached
    const auto history = ilc_train(scenario, cfg);
    CHECK(history.size() == 5);
}

TEST_CASE("a generous stop threshold ends the refinement early") {
    auto scenario = quick_scenario();
    auto cfg = harness::preset_ilc_config();
    cfg.max_iterations = 5;
    cfg.stop_rms_m = 1.0;  // satisfied immediately
    const auto history = ilc_train(scenario, cfg);
    CHECK(history.size() == 1);
}

TEST_CASE("divergence is detected and aborts with a diagnostic") {
    auto scenario = quick_scenario();
    auto cfg = harness::preset_ilc_config();
    cfg.max_iterations = 20;
    cfg.learning_gain = 2.0;
    // wrong sign: every update pushes the error further out
    cfg.plant_gain_estimate_N_per_m = -cfg.plant_gain_estimate_N_per_m;
    CHECK_THROWS_AS(ilc_train(scenario, cfg), std::runtime_error);
}

TEST_CASE("learning error is monotone on the linear stage") {
    auto scenario = quick_scenario();
    scenario.friction.coulomb_N = 0.0;
    scenario.friction.breakaway_N = 0.0;
    auto cfg = harness::preset_ilc_config();
    cfg.max_iterations = 10;
    const auto history = ilc_train(scenario, cfg);
    REQUIRE(history.size() == 10);
    for (std::size_t i = 1; i < history.size(); ++i)
        CHECK(history[i].rms_error_m <= history[i - 1].rms_error_m);
    CHECK(history.back().rms_error_m < history.front().rms_error_m);
}
