#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stagebench/timeseries.hpp"

namespace stagebench::analysis {

struct HarmonicLine {
    int k = 0;
    double amplitude = 0.0;
    double dbc = 0.0;
    // projection coefficients: component(t) = cos_coeff*cos(2 pi k f0 t) + sin_coeff*sin(...)
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

/// Result of coherent single-bin analysis of one channel at a known f0.
struct SpectrumReport {
    double f0_hz = 0.0;
    Unit unit = Unit::dimensionless;
    int n_harmonics = 0;
    double fundamental_amplitude = 0.0;
    double fundamental_cos = 0.0, fundamental_sin = 0.0;
    std::vector<HarmonicLine> harmonics;  // k = 2 .. n_harmonics
    double thd_percent = 0.0;
    double snr_db = 0.0;
    double residual_rms = 0.0;
};

/// Exact-bin correlation with sin/cos at k*f0 over a whole number (>= 2) of
/// periods; the mean is removed first, amplitudes are 2*|projection|/N. The
/// residual is the signal minus mean minus all reconstructed harmonics
/// 1..n_harmonics, and SNR = 20 log10(rms(fundamental) / rms(residual)).
/// Throws if the record does not span a whole number of periods (never
/// silently windows) or if a requested harmonic reaches Nyquist.
SpectrumReport coherent_spectrum(const TimeSeries& ts, double f0_hz, int n_harmonics = 10);

/// 100 * sqrt(sum of harmonic amplitudes squared) / fundamental amplitude.
double thd_percent(const SpectrumReport& report);

enum class ScaleDirection { disp_to_vel, vel_to_disp, vel_to_acc, acc_to_vel };

/// Per-harmonic level change under domain conversion: one differentiation step
/// multiplies harmonic k by k relative to the fundamental (+20 log10 k), one
/// integration divides (-20 log10 k).
double harmonic_scaling(double dbc, int k, ScaleDirection dir);

/// Convert a whole report between displacement/velocity/acceleration domains.
/// Harmonic amplitudes and THD convert exactly; snr_db and residual_rms stay
/// those of the analysis domain (broadband noise has no scalar conversion).
SpectrumReport convert_report(const SpectrumReport& report, Unit to);

/// Per-harmonic frequency-domain conversion of the signal itself:
/// differentiation multiplies harmonic k by 2 pi k f0 and advances phase 90
/// degrees, integration divides and retards. The output is rebuilt from
/// harmonics 1..n_harmonics only; mean and out-of-bin noise are dropped.
TimeSeries convert_domain(const TimeSeries& ts, Unit from, Unit to, double f0_hz,
                          int n_harmonics = 10);

struct DeviationReport {
    TimeSeries error;  // measured - nominal
    double rms_m = 0.0;
    double p2p_m = 0.0;
    double harmonic_power_fraction = 0.0;  // share of AC error power on bins k*f0, k=1..n
};

DeviationReport deviation(const TimeSeries& measured, const TimeSeries& nominal, double f0_hz,
                          int n_harmonics = 10);

/// The plotting transform used for deviation figures: nominal + k * (measured - nominal).
TimeSeries magnify_deviation(const TimeSeries& nominal, const TimeSeries& measured, double k);

/// Runs of >= min_len consecutive samples whose measured position does not
/// change while |reference velocity| exceeds vel_threshold; the stick-slip
/// signature counter. Returns [first, last) index pairs.
std::vector<std::pair<std::size_t, std::size_t>> stuck_intervals(
    const TimeSeries& measured_pos, const TimeSeries& ref_velocity, double vel_threshold_mps,
    std::size_t min_len = 2);

std::string report_json(const SpectrumReport& report);
std::string report_table(const SpectrumReport& report);
std::string deviation_summary(const DeviationReport& report);

}  // namespace stagebench::analysis
