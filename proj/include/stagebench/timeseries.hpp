#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace stagebench {

enum class Unit {
    meter,
    meter_per_s,
    meter_per_s2,
    newton,
    volt,
    dimensionless,
};

const char* unit_name(Unit u);

/// Uniformly sampled real-valued channel. Sample i lives at t0_s + i / sample_rate_hz;
/// the time axis is always recomputed from the index, never accumulated.
struct TimeSeries {
    double sample_rate_hz = 0.0;
    std::vector<double> samples;
    Unit unit = Unit::dimensionless;
    double t0_s = 0.0;

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t i) const {
        return t0_s + static_cast<double>(i) / sample_rate_hz;
    }
    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

/// Validating constructor; rejects non-positive rates and empty or non-finite data.
TimeSeries make_series(double sample_rate_hz, std::vector<double> values, Unit unit,
                       double t0_s = 0.0);

double rms(const std::vector<double>& v);
double rms(const TimeSeries& ts);
double mean(const std::vector<double>& v);
double peak_to_peak(const std::vector<double>& v);
double peak_to_peak(const TimeSeries& ts);

/// Seeded white Gaussian noise description. sigma is the standard deviation in
/// the unit of the channel the source feeds. seed == 0 is a sentinel meaning
/// "derive from the scenario seed" when the source is embedded in a sensor model.
struct NoiseSource {
    std::uint64_t seed = 0;
    double sigma = 0.0;
};

/// Deterministic Gaussian stream: std::mt19937_64 (bit-exact per the standard)
/// feeding a Box-Muller transform on 53-bit uniforms:
///   u1 = ((x >> 11) + 1) * 2^-53  in (0, 1],   u2 = (y >> 11) * 2^-53 in [0, 1)
///   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
/// The pair is consumed in order, so equal (seed, sigma, draw count) always
/// reproduces the same values.
class GaussianStream {
  public:
    explicit GaussianStream(const NoiseSource& src);
    double next();

  private:
    std::mt19937_64 rng_;
    double sigma_ = 0.0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::vector<double> gaussian_noise(const NoiseSource& src, std::size_t n);

/// splitmix64 mix step; used to derive per-channel noise seeds from a run seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace stagebench
