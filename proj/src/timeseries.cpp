#include "stagebench/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stagebench {

const char* unit_name(Unit u) {
    switch (u) {
        case Unit::meter: return "m";
        case Unit::meter_per_s: return "m/s";
        case Unit::meter_per_s2: return "m/s^2";
        case Unit::newton: return "N";
        case Unit::volt: return "V";
        case Unit::dimensionless: return "-";
    }
    return "?";
}

TimeSeries make_series(double sample_rate_hz, std::vector<double> values, Unit unit,
                       double t0_s) {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw std::invalid_argument("make_series: sample rate must be positive and finite");
    if (values.empty())
        throw std::invalid_argument("make_series: at least one sample required");
    for (double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("make_series: samples must be finite");
    }
    if (!std::isfinite(t0_s))
        throw std::invalid_argument("make_series: t0 must be finite");
    return TimeSeries{sample_rate_hz, std::move(values), unit, t0_s};
}

double rms(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("rms: empty sequence");
    long double acc = 0.0L;
    for (double x : v) acc += static_cast<long double>(x) * x;
    return static_cast<double>(std::sqrt(acc / static_cast<long double>(v.size())));
}

double rms(const TimeSeries& ts) { return rms(ts.samples); }

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sequence");
    long double acc = 0.0L;
    for (double x : v) acc += x;
    return static_cast<double>(acc / static_cast<long double>(v.size()));
}

double peak_to_peak(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("peak_to_peak: empty sequence");
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

double peak_to_peak(const TimeSeries& ts) { return peak_to_peak(ts.samples); }

GaussianStream::GaussianStream(const NoiseSource& src) : rng_(src.seed), sigma_(src.sigma) {
    if (!(src.sigma >= 0.0) || !std::isfinite(src.sigma))
        throw std::invalid_argument("noise sigma must be >= 0 and finite");
}

double GaussianStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return sigma_ * spare_;
    }
    constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;  // 2^-53
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * kTwoPow53Inv;
    const double u2 = static_cast<double>(rng_() >> 11) * kTwoPow53Inv;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return sigma_ * (r * std::cos(a));
}

std::vector<double> gaussian_noise(const NoiseSource& src, std::size_t n) {
    GaussianStream stream(src);
    std::vector<double> out(n);
    for (auto& x : out) x = stream.next();
    return out;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + salt * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace stagebench
