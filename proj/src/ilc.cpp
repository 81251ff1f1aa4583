#include "stagebench/ilc.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "stagebench/simulate.hpp"

namespace stagebench::servo {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

void IlcConfig::validate(double sample_rate_hz) const {
    if (!(learning_gain >= 0.0) || !(learning_gain <= 2.0))
        throw std::invalid_argument("ilc: learning gain must be within [0, 2]");
    if (lead_samples < 0) throw std::invalid_argument("ilc: lead_samples must be >= 0");
    if (!(q_cutoff_hz > 0.0) || !(q_cutoff_hz < 0.5 * sample_rate_hz))
        throw std::invalid_argument("ilc: q_cutoff must lie in (0, sample_rate/2)");
    if (max_iterations < 1) throw std::invalid_argument("ilc: max_iterations must be >= 1");
    if (!(stop_rms_m >= 0.0)) throw std::invalid_argument("ilc: stop_rms must be >= 0");
    if (!std::isfinite(plant_gain_estimate_N_per_m) || plant_gain_estimate_N_per_m == 0.0)
        throw std::invalid_argument("ilc: plant gain estimate must be finite and nonzero");
}

TimeSeries zero_phase_lowpass(const TimeSeries& ts, double cutoff_hz) {
    const std::size_t n = ts.size();
    if (n == 0) throw std::invalid_argument("zero_phase_lowpass: empty series");
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * ts.sample_rate_hz))
        throw std::invalid_argument("zero_phase_lowpass: cutoff must lie in (0, rate/2)");

    // DFT-domain brickwall: bins at or below the cutoff pass unchanged, the
    // rest vanish. Zero phase by construction and exact on the batch grid.
    const auto nbins = static_cast<std::size_t>(
        std::floor(cutoff_hz * static_cast<double>(n) / ts.sample_rate_hz + 1e-9));
    const std::size_t max_bin = (n - 1) / 2;
    const std::size_t keep = std::min(nbins, max_bin);

    std::vector<double> cos_tab(n), sin_tab(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        cos_tab[j] = std::cos(a);
        sin_tab[j] = std::sin(a);
    }

    std::vector<double> out(n, mean(ts.samples));
    for (std::size_t b = 1; b <= keep; ++b) {
        long double c = 0.0L, s = 0.0L;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            c += ts.samples[i] * cos_tab[idx];
            s += ts.samples[i] * sin_tab[idx];
            idx += b;
            if (idx >= n) idx -= n;
        }
        const double ck = static_cast<double>(2.0L * c / static_cast<long double>(n));
        const double sk = static_cast<double>(2.0L * s / static_cast<long double>(n));
        idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += ck * cos_tab[idx] + sk * sin_tab[idx];
            idx += b;
            if (idx >= n) idx -= n;
        }
    }
    return TimeSeries{ts.sample_rate_hz, std::move(out), ts.unit, ts.t0_s};
}

TimeSeries ilc_update(const TimeSeries& u, const TimeSeries& e, const IlcConfig& cfg,
                      double plant_gain_estimate_N_per_m) {
    if (u.size() != e.size() || u.sample_rate_hz != e.sample_rate_hz)
        throw std::invalid_argument("ilc_update: command and error batches differ in shape");
    if (u.unit != Unit::newton)
        throw std::invalid_argument("ilc_update: command must be a force channel [N]");
    if (e.unit != Unit::meter)
        throw std::invalid_argument("ilc_update: error must be a position channel [m]");
    cfg.validate(u.sample_rate_hz);
    if (!std::isfinite(plant_gain_estimate_N_per_m) || plant_gain_estimate_N_per_m == 0.0)
        throw std::invalid_argument("ilc_update: plant gain estimate must be finite and nonzero");

    const std::size_t n = u.size();
    const std::size_t lead = static_cast<std::size_t>(cfg.lead_samples) % n;
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + lead;
        if (j >= n) j -= n;  // circular: the reference repeats
        raw[i] = u.samples[i] +
                 cfg.learning_gain * plant_gain_estimate_N_per_m * e.samples[j];
    }
    return zero_phase_lowpass(TimeSeries{u.sample_rate_hz, std::move(raw), Unit::newton, u.t0_s},
                              cfg.q_cutoff_hz);
}

IlcHistory ilc_train(const harness::StageScenario& scenario, const IlcConfig& cfg) {
    scenario.validate();
    cfg.validate(scenario.servo.control_rate_hz);

    const std::size_t n = scenario.capture_samples();
    const std::size_t settle_samples =
        static_cast<std::size_t>(scenario.settle_periods) * scenario.control_steps_per_period();
    if (settle_samples % n != 0)
        throw std::invalid_argument(
            "ilc_train: settling span must be a whole number of capture windows "
            "(cyclic command alignment)");

    const double t0 = static_cast<double>(settle_samples) / scenario.servo.control_rate_hz;
    TimeSeries u{scenario.servo.control_rate_hz, std::vector<double>(n, 0.0), Unit::newton, t0};

    IlcHistory history;
    history.reserve(cfg.max_iterations);
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const harness::RunRecord rec = harness::simulate(scenario, &u);

        std::vector<double> err_meas(n), err_true(n);
        for (std::size_t i = 0; i < n; ++i) {
            err_meas[i] = rec.ref_pos_m.samples[i] - rec.enc_pos_m.samples[i];
            err_true[i] = rec.true_pos_m.samples[i] - rec.ref_pos_m.samples[i];
        }

        IlcIteration entry;
        entry.rms_error_m = rms(err_true);
        entry.p2p_error_m = peak_to_peak(err_true);
        entry.command = u;
        history.push_back(std::move(entry));

        if (history.back().rms_error_m <= cfg.stop_rms_m) break;
        if (history.size() >= 4) {
            const double now = history.back().rms_error_m;
            const double before = history[history.size() - 4].rms_error_m;
            if (before > 0.0 && now >= 10.0 * before) {
                char msg[160];
                std::snprintf(msg, sizeof(msg),
                              "ilc diverged: rms error grew from %.3e to %.3e m over 3 iterations",
                              before, now);
                throw std::runtime_error(msg);
            }
        }
        if (iter < cfg.max_iterations) {
            const TimeSeries e{scenario.servo.control_rate_hz, std::move(err_meas), Unit::meter,
                               t0};
            u = ilc_update(u, e, cfg, cfg.plant_gain_estimate_N_per_m);
        }
    }
    return history;
}

}  // namespace stagebench::servo
