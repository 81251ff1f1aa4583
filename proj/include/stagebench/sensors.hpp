#pragma once

#include "stagebench/timeseries.hpp"

namespace stagebench::sensors {

/// Integral optical scale: counting quantization plus an Abbe error from a
/// lateral offset combined with a position-periodic pitch of the carriage,
///   reading = q * round((x + abbe_offset * tilt_amp * sin(2 pi x / tilt_period) + noise) / q)
/// with round-half-away-from-zero.
struct EncoderModel {
    double resolution_m = 2.5e-9;
    double abbe_offset_m = 0.0;
    double tilt_amplitude_rad = 0.0;
    double tilt_period_m = 1.0;
    NoiseSource noise;

    void validate() const;
};

double encoder_read(double true_pos_m, const EncoderModel& m, double noise_m = 0.0);
TimeSeries encoder_read(const TimeSeries& true_pos, const EncoderModel& m);

/// Co-linear laser Doppler vibrometer: first-order low-pass on the true
/// velocity (pre-warped bilinear transform, so the -3 dB point sits exactly at
/// bandwidth_hz), a multiplicative gain error, and additive white noise.
struct VibrometerModel {
    double gain_error = 0.0;
    double bandwidth_hz = 10000.0;
    NoiseSource noise;

    void validate() const;
};

class VibrometerState {
  public:
    VibrometerState(const VibrometerModel& m, double sample_rate_hz);
    double step(double true_vel_mps);

  private:
    double b0_, a1_;
    double prev_in_ = 0.0, prev_out_ = 0.0;
    bool primed_ = false;
    double gain_;
    GaussianStream noise_;
};

TimeSeries vibrometer_read(const TimeSeries& true_vel, const VibrometerModel& m);

enum class DutKind { accelerometer, geophone };

/// Device under test. The accelerometer responds as a unity-gain second-order
/// low-pass wn^2/(s^2 + 2 zeta wn s + wn^2) on acceleration; the geophone as
/// s/(s^2 + 2 zeta wn s + wn^2) on acceleration (the velocity high-pass
/// s^2/(...) folded through v = a/s). Both sections are discretized with a
/// bilinear transform pre-warped at natural_freq_hz. The filtered signal then
/// passes the static nonlinearity y = x + c2 x^2 + c3 x^3, is scaled by
/// sensitivity, gets additive noise, and is clamped and quantized by a
/// mid-tread ADC with 2^adc_bits uniform levels across +/- full_scale.
struct DutModel {
    DutKind kind = DutKind::accelerometer;
    double natural_freq_hz = 2000.0;
    double damping_ratio = 0.707;
    double sensitivity = 1.0;
    double c2 = 0.0;  // (m/s^2)^-1
    double c3 = 0.0;  // (m/s^2)^-2
    int adc_bits = 24;
    double full_scale = 20.0;  // input units (m/s^2 for accelerometers)
    NoiseSource noise;

    void validate() const;
    Unit output_unit() const {
        return kind == DutKind::accelerometer ? Unit::meter_per_s2 : Unit::meter_per_s;
    }
};

class DutState {
  public:
    DutState(const DutModel& m, double sample_rate_hz);
    double step(double true_acc_mps2);

  private:
    double b0_, b1_, b2_, a1_, a2_;
    double s1_ = 0.0, s2_ = 0.0;  // transposed direct form II
    bool primed_ = false;
    DutModel model_;
    GaussianStream noise_;
};

TimeSeries dut_read(const TimeSeries& true_acc, const DutModel& m);

/// Quantization step of the DUT ADC in output units: 2 * full_scale * sensitivity / 2^bits.
double adc_lsb(const DutModel& m);

/// ADC clamp + mid-tread quantization alone (exposed for tests).
double adc_quantize(double value, const DutModel& m);

/// Best-case resolution of a `bits`-wide converter as parts per million: 1e6 / 2^bits.
double lsb_resolution_ppm(int bits);

}  // namespace stagebench::sensors
