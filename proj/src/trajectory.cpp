#include "stagebench/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stagebench::trajectory {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

double SineProfile::peak_velocity_mps() const { return kTwoPi * frequency_hz * amplitude_m; }

double SineProfile::peak_acceleration_mps2() const {
    const double w = kTwoPi * frequency_hz;
    return w * w * amplitude_m;
}

double SineProfile::position_at(double t_s) const {
    return offset_m + amplitude_m * std::sin(kTwoPi * frequency_hz * t_s + phase_rad);
}

double SineProfile::velocity_at(double t_s) const {
    const double w = kTwoPi * frequency_hz;
    return amplitude_m * w * std::cos(w * t_s + phase_rad);
}

double SineProfile::acceleration_at(double t_s) const {
    const double w = kTwoPi * frequency_hz;
    return -amplitude_m * w * w * std::sin(w * t_s + phase_rad);
}

std::size_t SineProfile::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void SineProfile::validate() const {
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw std::invalid_argument("profile: frequency must be positive");
    if (!(amplitude_m >= 0.0) || !std::isfinite(amplitude_m))
        throw std::invalid_argument("profile: amplitude must be >= 0");
    if (!std::isfinite(phase_rad) || !std::isfinite(offset_m))
        throw std::invalid_argument("profile: phase/offset must be finite");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw std::invalid_argument("profile: duration must be positive");
    if (!(sample_rate_hz >= 20.0 * frequency_hz))
        throw std::invalid_argument(
            "profile: sample rate must be at least 20x the frequency");
    // whole-period capture, within half a sample
    const double p = periods();
    if (std::fabs(p - std::round(p)) > 0.5 * frequency_hz / sample_rate_hz)
        throw std::invalid_argument(
            "profile: duration must cover a whole number of periods");
    if (sample_count() < 1)
        throw std::invalid_argument("profile: duration shorter than one sample");
}

SineProfile profile_for_periods(double frequency_hz, double amplitude_m, int periods,
                                double samples_per_period) {
    if (periods < 1) throw std::invalid_argument("profile: period count must be >= 1");
    SineProfile p;
    p.frequency_hz = frequency_hz;
    p.amplitude_m = amplitude_m;
    p.duration_s = static_cast<double>(periods) / frequency_hz;
    p.sample_rate_hz = samples_per_period * frequency_hz;
    p.validate();
    return p;
}

double required_amplitude(double a_peak_mps2, double f_hz) {
    if (!(f_hz > 0.0)) throw std::domain_error("required_amplitude: frequency must be > 0");
    if (!(a_peak_mps2 >= 0.0))
        throw std::domain_error("required_amplitude: acceleration must be >= 0");
    const double w = kTwoPi * f_hz;
    return a_peak_mps2 / (w * w);
}

double peak_acceleration(double amplitude_m, double f_hz) {
    if (!(f_hz > 0.0)) throw std::domain_error("peak_acceleration: frequency must be > 0");
    if (!(amplitude_m >= 0.0))
        throw std::domain_error("peak_acceleration: amplitude must be >= 0");
    const double w = kTwoPi * f_hz;
    return w * w * amplitude_m;
}

MotionProfile generate_profile(const SineProfile& p) {
    p.validate();
    const std::size_t n = p.sample_count();
    std::vector<double> pos(n), vel(n), acc(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / p.sample_rate_hz;
        pos[i] = p.position_at(t);
        vel[i] = p.velocity_at(t);
        acc[i] = p.acceleration_at(t);
    }
    MotionProfile out;
    out.position = TimeSeries{p.sample_rate_hz, std::move(pos), Unit::meter, 0.0};
    out.velocity = TimeSeries{p.sample_rate_hz, std::move(vel), Unit::meter_per_s, 0.0};
    out.acceleration = TimeSeries{p.sample_rate_hz, std::move(acc), Unit::meter_per_s2, 0.0};
    return out;
}

std::vector<std::pair<double, double>> envelope_table(double a_peak_mps2,
                                                      const std::vector<double>& freqs_hz) {
    std::vector<std::pair<double, double>> out;
    out.reserve(freqs_hz.size());
    for (double f : freqs_hz) out.emplace_back(f, required_amplitude(a_peak_mps2, f));
    return out;
}

std::string envelope_csv(const std::vector<std::pair<double, double>>& table) {
    std::string out = "freq_hz,amplitude_m\n";
    char buf[80];
    for (const auto& [f, a] : table) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", f, a);
        out += buf;
    }
    return out;
}

}  // namespace stagebench::trajectory
