#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stagebench/timeseries.hpp"

namespace stagebench::trajectory {

/// Nominal sinusoidal excitation. amplitude_m is half of the peak-to-peak travel,
/// so peak acceleration is (2 pi f)^2 * A. Profiles span a whole number of periods
/// (required downstream for leakage-free coherent analysis).
struct SineProfile {
    double frequency_hz = 1.0;
    double amplitude_m = 0.0;
    double phase_rad = 0.0;
    double offset_m = 0.0;
    double duration_s = 1.0;
    double sample_rate_hz = 1000.0;

    double peak_velocity_mps() const;
    double peak_acceleration_mps2() const;

    double position_at(double t_s) const;
    double velocity_at(double t_s) const;
    double acceleration_at(double t_s) const;

    std::size_t sample_count() const;
    double periods() const { return duration_s * frequency_hz; }

    void validate() const;  // throws std::invalid_argument
};

/// Profile covering `periods` whole periods at `samples_per_period` points each.
SineProfile profile_for_periods(double frequency_hz, double amplitude_m, int periods,
                                double samples_per_period = 1000.0);

/// Amplitude needed to reach a_peak at frequency f: a_peak / (2 pi f)^2.
double required_amplitude(double a_peak_mps2, double f_hz);

/// Inverse of required_amplitude: (2 pi f)^2 * A.
double peak_acceleration(double amplitude_m, double f_hz);

struct MotionProfile {
    TimeSeries position;
    TimeSeries velocity;
    TimeSeries acceleration;
};

/// Samples the profile and its exact analytic derivatives on one shared grid.
MotionProfile generate_profile(const SineProfile& p);

std::vector<std::pair<double, double>> envelope_table(double a_peak_mps2,
                                                      const std::vector<double>& freqs_hz);

/// CSV with header `freq_hz,amplitude_m`, '.' decimal separator, one row per frequency.
std::string envelope_csv(const std::vector<std::pair<double, double>>& table);

}  // namespace stagebench::trajectory
