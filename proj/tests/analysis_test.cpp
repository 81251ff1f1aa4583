#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stagebench/analysis.hpp"

using namespace stagebench;
using namespace stagebench::analysis;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

TimeSeries tone(double rate, std::size_t n, double f, double amp, double phase = 0.0,
                Unit unit = Unit::meter) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amp * std::sin(kTwoPi * f * static_cast<double>(i) / rate + phase);
    return TimeSeries{rate, std::move(v), unit, 0.0};
}

void add_tone(TimeSeries& ts, double f, double amp, double phase = 0.0) {
    for (std::size_t i = 0; i < ts.size(); ++i)
        ts.samples[i] +=
            amp * std::sin(kTwoPi * f * static_cast<double>(i) / ts.sample_rate_hz + phase);
}

}  // namespace

TEST_CASE("pure sine analyzes to its exact amplitude and an empty harmonic set") {
    const double A = 118.5e-6;
    const auto ts = tone(12000.0, 20000, 12.0, A, 0.37);
    const auto rep = coherent_spectrum(ts, 12.0, 10);
    CHECK(std::fabs(rep.fundamental_amplitude - A) <= 1e-9 * A);
    CHECK(rep.thd_percent < 1e-7);
    for (const auto& h : rep.harmonics) CHECK(h.dbc < -140.0);
    CHECK(rep.snr_db > 140.0);
}

TEST_CASE("an injected -94 dB second harmonic is recovered") {
    const double A = 118.5e-6;
    auto ts = tone(12000.0, 20000, 12.0, A);
    add_tone(ts, 24.0, A * std::pow(10.0, -94.0 / 20.0), 0.9);
    const auto rep = coherent_spectrum(ts, 12.0, 10);
    CHECK(rep.harmonics[0].k == 2);
    CHECK(rep.harmonics[0].dbc == doctest::Approx(-94.0).epsilon(0.001));
}

TEST_CASE("white noise pinned for a 110 dB floor reads back as 110 dB") {
    const double A = 118.5e-6;
    auto ts = tone(12000.0, 20000, 12.0, A);
    const double sigma = (A / std::sqrt(2.0)) * std::pow(10.0, -110.0 / 20.0);
    const auto noise = gaussian_noise(NoiseSource{2468, sigma}, ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ts.samples[i] += noise[i];
    const auto rep = coherent_spectrum(ts, 12.0, 10);
    CHECK(rep.snr_db == doctest::Approx(110.0).epsilon(2.0 / 110.0));
}

TEST_CASE("records that do not span whole periods are refused") {
    const auto ok = tone(12000.0, 2000, 12.0, 1.0);
    CHECK_NOTHROW(coherent_spectrum(ok, 12.0, 10));
    const auto ragged = tone(12000.0, 2100, 12.0, 1.0);
    CHECK_THROWS_AS(coherent_spectrum(ragged, 12.0, 10), std::invalid_argument);
    const auto single = tone(12000.0, 1000, 12.0, 1.0);
    CHECK_THROWS_AS(coherent_spectrum(single, 12.0, 10), std::invalid_argument);
}

TEST_CASE("harmonics past Nyquist are refused") {
    const auto ts = tone(300.0, 200, 12.0, 1.0);  // 10th harmonic = 120 Hz < 150 ok
    CHECK_NOTHROW(coherent_spectrum(ts, 12.0, 10));
    CHECK_THROWS_AS(coherent_spectrum(ts, 12.0, 13), std::invalid_argument);  // 156 Hz
    CHECK_THROWS_AS(coherent_spectrum(ts, 12.0, 1), std::invalid_argument);   // needs >= 2
}

TEST_CASE("thd accessor closed forms") {
    const double A = 1.0;
    auto single = tone(12000.0, 4000, 12.0, A);
    add_tone(single, 24.0, 5.2e-5 * A);
    const auto rep1 = coherent_spectrum(single, 12.0, 10);
    CHECK(rep1.thd_percent == doctest::Approx(0.0052).epsilon(1e-6));
    CHECK(thd_percent(rep1) == doctest::Approx(rep1.thd_percent).epsilon(1e-12));

    auto twin = tone(12000.0, 4000, 12.0, A);
    add_tone(twin, 24.0, 3e-5 * A, 0.4);
    add_tone(twin, 36.0, 4e-5 * A, 1.7);
    const auto rep2 = coherent_spectrum(twin, 12.0, 10);
    CHECK(rep2.thd_percent == doctest::Approx(0.005).epsilon(1e-6));

    const auto clean = coherent_spectrum(tone(12000.0, 4000, 12.0, A), 12.0, 10);
    CHECK(clean.thd_percent < 1e-7);
}

TEST_CASE("domain conversion follows the calculus") {
    const double A = 118.5e-6, f = 12.0;
    const auto disp = tone(12000.0, 2000, f, A);
    const auto vel = convert_domain(disp, Unit::meter, Unit::meter_per_s, f);
    const auto vrep = coherent_spectrum(vel, f, 10);
    CHECK(vrep.fundamental_amplitude == doctest::Approx(kTwoPi * f * A).epsilon(1e-9));
    CHECK(vel.unit == Unit::meter_per_s);

    // round trip is the identity on band-limited content
    const auto back = convert_domain(vel, Unit::meter_per_s, Unit::meter, f);
    for (std::size_t i = 0; i < disp.size(); ++i)
        CHECK(std::fabs(back.samples[i] - disp.samples[i]) <= 1e-9 * A);
}

TEST_CASE("displacement-to-velocity conversion lifts the second harmonic by 6 dB") {
    const double A = 118.5e-6, f = 12.0;
    auto disp = tone(12000.0, 2000, f, A);
    add_tone(disp, 2.0 * f, A * std::pow(10.0, -100.0 / 20.0), 0.8);

    // series path: convert the signal, analyze in the velocity domain
    const auto vel = convert_domain(disp, Unit::meter, Unit::meter_per_s, f);
    const auto vrep = coherent_spectrum(vel, f, 10);
    CHECK(vrep.harmonics[0].dbc == doctest::Approx(-93.98).epsilon(1e-3));

    // report path: analyze in displacement, convert the report
    const auto drep = coherent_spectrum(disp, f, 10);
    CHECK(drep.harmonics[0].dbc == doctest::Approx(-100.0).epsilon(1e-4));
    const auto conv = convert_report(drep, Unit::meter_per_s);
    CHECK(conv.harmonics[0].dbc == doctest::Approx(-93.98).epsilon(1e-3));
    CHECK(conv.fundamental_amplitude == doctest::Approx(kTwoPi * f * A).epsilon(1e-9));
}

TEST_CASE("harmonic level scaling between domains") {
    CHECK(harmonic_scaling(-100.0, 2, ScaleDirection::disp_to_vel) ==
          doctest::Approx(-93.98).epsilon(1e-4));
    CHECK(harmonic_scaling(-94.0, 2, ScaleDirection::vel_to_disp) ==
          doctest::Approx(-100.02).epsilon(1e-4));
    CHECK(harmonic_scaling(-77.7, 1, ScaleDirection::disp_to_vel) == -77.7);
    CHECK(harmonic_scaling(-77.7, 1, ScaleDirection::acc_to_vel) == -77.7);
    CHECK_THROWS_AS(harmonic_scaling(-80.0, 0, ScaleDirection::disp_to_vel),
                    std::invalid_argument);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> level(-140.0, -20.0);
    std::uniform_int_distribution<int> kdist(1, 10);
    for (int i = 0; i < 500; ++i) {
        const double dbc = level(rng);
        const int k = kdist(rng);
        CHECK(harmonic_scaling(harmonic_scaling(dbc, k, ScaleDirection::disp_to_vel), k,
                               ScaleDirection::vel_to_disp) == doctest::Approx(dbc).epsilon(1e-12));
        CHECK(harmonic_scaling(harmonic_scaling(dbc, k, ScaleDirection::vel_to_acc), k,
                               ScaleDirection::acc_to_vel) == doctest::Approx(dbc).epsilon(1e-12));
    }
}

TEST_CASE("deviation of identical channels is zero") {
    const auto a = tone(12000.0, 2000, 12.0, 1e-4);
    const auto rep = deviation(a, a, 12.0);
    CHECK(rep.rms_m == 0.0);
    CHECK(rep.p2p_m == 0.0);
}

TEST_CASE("a pure harmonic deviation has unit harmonic power fraction") {
    const auto nominal = tone(12000.0, 2000, 12.0, 1e-4);
    auto measured = nominal;
    add_tone(measured, 24.0, 3e-9, 0.5);
    const auto rep = deviation(measured, nominal, 12.0);
    CHECK(rep.harmonic_power_fraction == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.rms_m == doctest::Approx(3e-9 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("white-noise deviation spreads its power thin across harmonic bins") {
    const std::size_t n = 24000;
    const auto nominal = tone(12000.0, n, 12.0, 1e-4);
    auto measured = nominal;
    const auto noise = gaussian_noise(NoiseSource{97, 1e-9}, n);
    for (std::size_t i = 0; i < n; ++i) measured.samples[i] += noise[i];
    const auto rep = deviation(measured, nominal, 12.0, 10);
    const double expect = 10.0 / (static_cast<double>(n) / 2.0);
    CHECK(rep.harmonic_power_fraction > 0.5 * expect);
    CHECK(rep.harmonic_power_fraction < 1.5 * expect);
}

TEST_CASE("deviation rejects mismatched channels") {
    const auto a = tone(12000.0, 2000, 12.0, 1e-4);
    const auto b = tone(12000.0, 1000, 12.0, 1e-4);
    CHECK_THROWS_AS(deviation(a, b, 12.0), std::invalid_argument);
    auto c = a;
    c.unit = Unit::meter_per_s;
    CHECK_THROWS_AS(deviation(a, c, 12.0), std::invalid_argument);
}

TEST_CASE("magnified traces interpolate between nominal and measured") {
    const auto nominal = tone(12000.0, 2000, 12.0, 1e-4);
    auto measured = nominal;
    for (auto& x : measured.samples) x += 1e-9;

    const auto same = magnify_deviation(nominal, measured, 1.0);
    const auto none = magnify_deviation(nominal, measured, 0.0);
    const auto big = magnify_deviation(nominal, measured, 200.0);
    for (std::size_t i = 0; i < nominal.size(); ++i) {
        CHECK(same.samples[i] == measured.samples[i]);
        CHECK(none.samples[i] == nominal.samples[i]);
        CHECK(big.samples[i] - nominal.samples[i] == doctest::Approx(200e-9).epsilon(1e-9));
    }
}

TEST_CASE("energy balance: lines plus residual reconstruct the record") {
    auto ts = tone(12000.0, 6000, 12.0, 1.0, 0.1);
    add_tone(ts, 24.0, 1e-4, 0.7);
    add_tone(ts, 60.0, 3e-5, 1.9);
    const auto noise = gaussian_noise(NoiseSource{31, 1e-5}, ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ts.samples[i] += noise[i] + 0.25;

    const auto rep = coherent_spectrum(ts, 12.0, 10);
    long double lines = static_cast<long double>(rep.fundamental_amplitude) *
                        rep.fundamental_amplitude / 2.0L;
    for (const auto& h : rep.harmonics)
        lines += static_cast<long double>(h.amplitude) * h.amplitude / 2.0L;
    lines += static_cast<long double>(rep.residual_rms) * rep.residual_rms;

    const double mu = mean(ts.samples);
    long double total = 0.0L;
    for (double x : ts.samples) {
        const double d = x - mu;
        total += static_cast<long double>(d) * d;
    }
    total /= static_cast<long double>(ts.size());
    CHECK(static_cast<double>(std::fabs(lines - total) / total) < 1e-9);
}

TEST_CASE("report is scale invariant apart from the fundamental") {
    auto ts = tone(12000.0, 4000, 12.0, 2e-4, 0.3);
    add_tone(ts, 36.0, 5e-9, 2.2);
    const auto noise = gaussian_noise(NoiseSource{55, 2e-10}, ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ts.samples[i] += noise[i];

    const auto a = coherent_spectrum(ts, 12.0, 10);
    auto scaled = ts;
    for (auto& x : scaled.samples) x *= 7.3;
    const auto b = coherent_spectrum(scaled, 12.0, 10);

    CHECK(b.fundamental_amplitude ==
          doctest::Approx(7.3 * a.fundamental_amplitude).epsilon(1e-12));
    CHECK(b.thd_percent == doctest::Approx(a.thd_percent).epsilon(1e-9));
    CHECK(b.snr_db == doctest::Approx(a.snr_db).epsilon(1e-9));
    for (std::size_t i = 0; i < a.harmonics.size(); ++i)
        CHECK(b.harmonics[i].dbc == doctest::Approx(a.harmonics[i].dbc).epsilon(1e-9));
}

TEST_CASE("analyzer stays linear down to the 1e-7 injection level") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    for (double r : {1e-7, 3e-6, 1e-4, 1e-2}) {
        auto ts = tone(12000.0, 4000, 12.0, 1.0, phase(rng));
        add_tone(ts, 24.0, r, phase(rng));
        const auto rep = coherent_spectrum(ts, 12.0, 10);
        CHECK(std::fabs(rep.harmonics[0].dbc - 20.0 * std::log10(r)) < 0.1);
    }
}

TEST_CASE("stuck interval counting") {
    const double rate = 1000.0;
    std::vector<double> pos(1000), vel(1000, 1.0);
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<double>(i);
    // freeze two stretches; make ref velocity too small over the second
    for (std::size_t i = 100; i < 120; ++i) pos[i] = pos[99];
    for (std::size_t i = 400; i < 430; ++i) pos[i] = pos[399];
    for (std::size_t i = 400; i < 430; ++i) vel[i] = 0.01;
    // and a single-sample freeze that stays below min_len
    pos[700] = pos[699];

    const TimeSeries p{rate, pos, Unit::meter, 0.0};
    const TimeSeries v{rate, vel, Unit::meter_per_s, 0.0};
    const auto intervals = stuck_intervals(p, v, 0.5, 2);
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].first == 100);
    CHECK(intervals[0].second == 120);
}

TEST_CASE("machine report carries the documented keys") {
    auto ts = tone(12000.0, 2000, 12.0, 1e-4);
    add_tone(ts, 24.0, 1e-9);
    const auto rep = coherent_spectrum(ts, 12.0, 10);
    const auto j = nlohmann::json::parse(report_json(rep));
    CHECK(j["f0_hz"] == 12.0);
    CHECK(j["fundamental_amplitude"].get<double>() == doctest::Approx(1e-4));
    REQUIRE(j["harmonics"].is_array());
    CHECK(j["harmonics"].size() == 9);
    CHECK(j["harmonics"][0]["k"] == 2);
    CHECK(j["harmonics"][0].contains("amplitude"));
    CHECK(j["harmonics"][0].contains("dbc"));
    CHECK(j.contains("thd_percent"));
    CHECK(j.contains("snr_db"));
    CHECK(j.contains("residual_rms"));

    const auto table = report_table(rep);
    CHECK(table.find("THD") != std::string::npos);
    CHECK(table.find("SNR") != std::string::npos);
}
