#include "stagebench/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stagebench::sensors {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

void EncoderModel::validate() const {
    if (!(resolution_m > 0.0)) throw std::invalid_argument("encoder: resolution must be > 0");
    if (!(tilt_period_m > 0.0)) throw std::invalid_argument("encoder: tilt period must be > 0");
    if (!(tilt_amplitude_rad >= 0.0))
        throw std::invalid_argument("encoder: tilt amplitude must be >= 0");
    if (!std::isfinite(abbe_offset_m))
        throw std::invalid_argument("encoder: abbe offset must be finite");
}

double encoder_read(double true_pos_m, const EncoderModel& m, double noise_m) {
    const double abbe =
        m.abbe_offset_m * m.tilt_amplitude_rad * std::sin(kTwoPi * true_pos_m / m.tilt_period_m);
    const double arg = true_pos_m + abbe + noise_m;
    return m.resolution_m * std::round(arg / m.resolution_m);
}

TimeSeries encoder_read(const TimeSeries& true_pos, const EncoderModel& m) {
    if (true_pos.unit != Unit::meter)
        throw std::invalid_argument("encoder_read: input must be a position channel [m]");
    m.validate();
    GaussianStream noise(m.noise);
    std::vector<double> out(true_pos.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = encoder_read(true_pos.samples[i], m, noise.next());
    return TimeSeries{true_pos.sample_rate_hz, std::move(out), Unit::meter, true_pos.t0_s};
}

void VibrometerModel::validate() const {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("vibrometer: bandwidth must be > 0");
    if (!std::isfinite(gain_error))
        throw std::invalid_argument("vibrometer: gain error must be finite");
}

VibrometerState::VibrometerState(const VibrometerModel& m, double sample_rate_hz)
    : gain_(1.0 + m.gain_error), noise_(m.noise) {
    m.validate();
    if (!(m.bandwidth_hz < 0.5 * sample_rate_hz))
        throw std::invalid_argument("vibrometer: bandwidth must be below Nyquist");
    // one-pole low-pass, bilinear transform pre-warped at the corner:
    //   wd = tan(pi fc / fs);  y[n] = b0 (x[n] + x[n-1]) - a1 y[n-1]
    const double wd = std::tan(M_PI * m.bandwidth_hz / sample_rate_hz);
    b0_ = wd / (1.0 + wd);
    a1_ = (wd - 1.0) / (1.0 + wd);
}

double VibrometerState::step(double true_vel_mps) {
    if (!primed_) {
        prev_in_ = true_vel_mps;
        prev_out_ = true_vel_mps;  // steady state: DC gain is exactly 1
        primed_ = true;
    }
    const double y = b0_ * (true_vel_mps + prev_in_) - a1_ * prev_out_;
    prev_in_ = true_vel_mps;
    prev_out_ = y;
    return gain_ * y + noise_.next();
}

TimeSeries vibrometer_read(const TimeSeries& true_vel, const VibrometerModel& m) {
    if (true_vel.unit != Unit::meter_per_s)
        throw std::invalid_argument("vibrometer_read: input must be a velocity channel [m/s]");
    VibrometerState state(m, true_vel.sample_rate_hz);
    std::vector<double> out(true_vel.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = state.step(true_vel.samples[i]);
    return TimeSeries{true_vel.sample_rate_hz, std::move(out), Unit::meter_per_s, true_vel.t0_s};
}

void DutModel::validate() const {
    if (!(natural_freq_hz > 0.0)) throw std::invalid_argument("dut: natural frequency must be > 0");
    if (!(damping_ratio > 0.0)) throw std::invalid_argument("dut: damping ratio must be > 0");
    if (!(sensitivity > 0.0)) throw std::invalid_argument("dut: sensitivity must be > 0");
    if (adc_bits < 8 || adc_bits > 32)
        throw std::invalid_argument("dut: adc_bits must be within [8, 32]");
    if (!(full_scale > 0.0)) throw std::invalid_argument("dut: full scale must be > 0");
    if (!std::isfinite(c2) || !std::isfinite(c3))
        throw std::invalid_argument("dut: nonlinearity coefficients must be finite");
}

DutState::DutState(const DutModel& m, double sample_rate_hz) : model_(m), noise_(m.noise) {
    m.validate();
    if (!(m.natural_freq_hz < 0.5 * sample_rate_hz))
        throw std::invalid_argument("dut: natural frequency must be below Nyquist");
    // second-order section, bilinear transform pre-warped at wn
    const double wn = kTwoPi * m.natural_freq_hz;
    const double K = wn / std::tan(M_PI * m.natural_freq_hz / sample_rate_hz);
    const double D = K * K + 2.0 * m.damping_ratio * wn * K + wn * wn;
    a1_ = (2.0 * wn * wn - 2.0 * K * K) / D;
    a2_ = (K * K - 2.0 * m.damping_ratio * wn * K + wn * wn) / D;
    if (m.kind == DutKind::accelerometer) {
        b0_ = wn * wn / D;
        b1_ = 2.0 * b0_;
        b2_ = b0_;
    } else {  // geophone: s / (s^2 + 2 zeta wn s + wn^2) on acceleration
        b0_ = K / D;
        b1_ = 0.0;
        b2_ = -K / D;
    }
}

double DutState::step(double true_acc_mps2) {
    if (!primed_) {
        // assume the input has been constant forever; settles to g_dc * x
        const double g = (b0_ + b1_ + b2_) / (1.0 + a1_ + a2_);
        s1_ = (g - b0_) * true_acc_mps2;
        s2_ = (b2_ - a2_ * g) * true_acc_mps2;
        primed_ = true;
    }
    const double x = true_acc_mps2;
    const double w = b0_ * x + s1_;
    s1_ = b1_ * x - a1_ * w + s2_;
    s2_ = b2_ * x - a2_ * w;

    const double y = w + model_.c2 * w * w + model_.c3 * w * w * w;
    const double v = model_.sensitivity * y + noise_.next();
    return adc_quantize(v, model_);
}

TimeSeries dut_read(const TimeSeries& true_acc, const DutModel& m) {
    if (true_acc.unit != Unit::meter_per_s2)
        throw std::invalid_argument("dut_read: input must be an acceleration channel [m/s^2]");
    DutState state(m, true_acc.sample_rate_hz);
    std::vector<double> out(true_acc.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = state.step(true_acc.samples[i]);
    return TimeSeries{true_acc.sample_rate_hz, std::move(out), m.output_unit(), true_acc.t0_s};
}

double adc_lsb(const DutModel& m) {
    return 2.0 * m.full_scale * m.sensitivity * std::ldexp(1.0, -m.adc_bits);
}

double adc_quantize(double value, const DutModel& m) {
    const double fs = m.full_scale * m.sensitivity;
    const double lsb = adc_lsb(m);
    const double clamped = std::clamp(value, -fs, fs);
    long long code = std::llround(clamped / lsb);
    const long long code_max = (1LL << (m.adc_bits - 1)) - 1;
    const long long code_min = -(1LL << (m.adc_bits - 1));
    code = std::clamp(code, code_min, code_max);
    return static_cast<double>(code) * lsb;
}

double lsb_resolution_ppm(int bits) {
    if (bits < 1) throw std::invalid_argument("lsb_resolution_ppm: bits must be >= 1");
    return 1e6 * std::ldexp(1.0, -bits);
}

}  // namespace stagebench::sensors
