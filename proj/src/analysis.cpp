#include "stagebench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace stagebench::analysis {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kDbFloor = -400.0;  // reported instead of -inf for zero amplitudes
constexpr double kDbCap = 400.0;     // reported instead of +inf for zero residual

struct BinBasis {
    std::vector<double> cos_tab, sin_tab;
    explicit BinBasis(std::size_t n) : cos_tab(n), sin_tab(n) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            cos_tab[j] = std::cos(a);
            sin_tab[j] = std::sin(a);
        }
    }
};

struct GridCheck {
    std::size_t n;
    long long periods;  // whole periods spanned by the record
};

GridCheck check_coherent_grid(const TimeSeries& ts, double f0_hz) {
    if (ts.samples.empty()) throw std::invalid_argument("analysis: empty series");
    if (!(ts.sample_rate_hz > 0.0)) throw std::invalid_argument("analysis: invalid sample rate");
    if (!(f0_hz > 0.0) || !std::isfinite(f0_hz))
        throw std::invalid_argument("analysis: f0 must be positive");
    const std::size_t n = ts.size();
    const double periods = static_cast<double>(n) * f0_hz / ts.sample_rate_hz;
    const double m = std::round(periods);
    if (m < 2.0)
        throw std::invalid_argument("analysis: record must span at least 2 periods of f0");
    if (std::fabs(periods - m) > 0.5 * f0_hz / ts.sample_rate_hz)
        throw std::invalid_argument(
            "analysis: record must span a whole number of periods of f0 (no windowing)");
    return GridCheck{n, static_cast<long long>(m)};
}

void require_same_grid(const TimeSeries& a, const TimeSeries& b, const char* what) {
    if (a.size() != b.size() || a.sample_rate_hz != b.sample_rate_hz || a.t0_s != b.t0_s)
        throw std::invalid_argument(std::string(what) + ": sample grids differ");
}

int domain_order(Unit u) {
    switch (u) {
        case Unit::meter: return 0;
        case Unit::meter_per_s: return 1;
        case Unit::meter_per_s2: return 2;
        default: return -1;
    }
}

double amplitude_db(double amp, double ref) {
    if (!(amp > 0.0) || !(ref > 0.0)) return kDbFloor;
    return std::max(kDbFloor, 20.0 * std::log10(amp / ref));
}

}  // namespace

SpectrumReport coherent_spectrum(const TimeSeries& ts, double f0_hz, int n_harmonics) {
    if (n_harmonics < 2) throw std::invalid_argument("analysis: n_harmonics must be >= 2");
    const auto grid = check_coherent_grid(ts, f0_hz);
    const std::size_t n = grid.n;
    const long long m = grid.periods;

    // every reported harmonic must sit strictly below Nyquist
    if (2LL * static_cast<long long>(n_harmonics) * m >= static_cast<long long>(n))
        throw std::invalid_argument("analysis: harmonic above Nyquist");

    const double mu = mean(ts.samples);
    BinBasis basis(n);

    SpectrumReport rep;
    rep.f0_hz = f0_hz;
    rep.unit = ts.unit;
    rep.n_harmonics = n_harmonics;

    std::vector<double> recon(n, 0.0);
    std::vector<double> cc(n_harmonics + 1, 0.0), sc(n_harmonics + 1, 0.0);

    for (int k = 1; k <= n_harmonics; ++k) {
        const std::size_t step = static_cast<std::size_t>((static_cast<long long>(k) * m) %
                                                          static_cast<long long>(n));
        long double c = 0.0L, s = 0.0L;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = ts.samples[i] - mu;
            c += x * basis.cos_tab[idx];
            s += x * basis.sin_tab[idx];
            idx += step;
            if (idx >= n) idx -= n;
        }
        cc[k] = static_cast<double>(2.0L * c / static_cast<long double>(n));
        sc[k] = static_cast<double>(2.0L * s / static_cast<long double>(n));
        idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            recon[i] += cc[k] * basis.cos_tab[idx] + sc[k] * basis.sin_tab[idx];
            idx += step;
            if (idx >= n) idx -= n;
        }
    }

    rep.fundamental_cos = cc[1];
    rep.fundamental_sin = sc[1];
    rep.fundamental_amplitude = std::hypot(cc[1], sc[1]);

    long double racc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ts.samples[i] - mu - recon[i];
        racc += static_cast<long double>(r) * r;
    }
    rep.residual_rms = static_cast<double>(std::sqrt(racc / static_cast<long double>(n)));

    long double harm_sq = 0.0L;
    rep.harmonics.reserve(n_harmonics - 1);
    for (int k = 2; k <= n_harmonics; ++k) {
        HarmonicLine line;
        line.k = k;
        line.cos_coeff = cc[k];
        line.sin_coeff = sc[k];
        line.amplitude = std::hypot(cc[k], sc[k]);
        line.dbc = amplitude_db(line.amplitude, rep.fundamental_amplitude);
        harm_sq += static_cast<long double>(line.amplitude) * line.amplitude;
        rep.harmonics.push_back(line);
    }

    rep.thd_percent = rep.fundamental_amplitude > 0.0
                          ? 100.0 * static_cast<double>(std::sqrt(harm_sq)) /
                                rep.fundamental_amplitude
                          : 0.0;

    const double fund_rms = rep.fundamental_amplitude / std::sqrt(2.0);
    if (rep.residual_rms > 0.0 && fund_rms > 0.0)
        rep.snr_db = std::clamp(20.0 * std::log10(fund_rms / rep.residual_rms), kDbFloor, kDbCap);
    else
        rep.snr_db = fund_rms > 0.0 ? kDbCap : kDbFloor;
    return rep;
}

double thd_percent(const SpectrumReport& report) {
    if (!(report.fundamental_amplitude > 0.0)) return 0.0;
    long double acc = 0.0L;
    for (const auto& h : report.harmonics)
        acc += static_cast<long double>(h.amplitude) * h.amplitude;
    return 100.0 * static_cast<double>(std::sqrt(acc)) / report.fundamental_amplitude;
}

double harmonic_scaling(double dbc, int k, ScaleDirection dir) {
    if (k < 1) throw std::invalid_argument("harmonic_scaling: k must be >= 1");
    const double shift = 20.0 * std::log10(static_cast<double>(k));
    switch (dir) {
        case ScaleDirection::disp_to_vel:
        case ScaleDirection::vel_to_acc:
            return dbc + shift;
        case ScaleDirection::vel_to_disp:
        case ScaleDirection::acc_to_vel:
            return dbc - shift;
    }
    throw std::invalid_argument("harmonic_scaling: bad direction");
}

SpectrumReport convert_report(const SpectrumReport& report, Unit to) {
    const int from_order = domain_order(report.unit);
    const int to_order = domain_order(to);
    if (from_order < 0 || to_order < 0)
        throw std::invalid_argument("convert_report: unsupported unit pair");
    const int d = to_order - from_order;
    if (d == 0) return report;

    auto rotate = [&](double& c, double& s, int k) {
        std::complex<double> z(c, -s);
        const std::complex<double> iw(0.0, kTwoPi * k * report.f0_hz);
        for (int i = 0; i < std::abs(d); ++i) z = d > 0 ? z * iw : z / iw;
        c = z.real();
        s = -z.imag();
    };

    SpectrumReport out = report;
    out.unit = to;
    rotate(out.fundamental_cos, out.fundamental_sin, 1);
    out.fundamental_amplitude = std::hypot(out.fundamental_cos, out.fundamental_sin);
    for (auto& h : out.harmonics) {
        rotate(h.cos_coeff, h.sin_coeff, h.k);
        h.amplitude = std::hypot(h.cos_coeff, h.sin_coeff);
        h.dbc = amplitude_db(h.amplitude, out.fundamental_amplitude);
    }
    out.thd_percent = thd_percent(out);
    // snr_db and residual_rms keep their analysis-domain values
    return out;
}

TimeSeries convert_domain(const TimeSeries& ts, Unit from, Unit to, double f0_hz,
                          int n_harmonics) {
    if (ts.unit != from)
        throw std::invalid_argument("convert_domain: series unit does not match 'from'");
    if (domain_order(from) < 0 || domain_order(to) < 0)
        throw std::invalid_argument("convert_domain: unsupported unit pair");

    const SpectrumReport rep = coherent_spectrum(ts, f0_hz, n_harmonics);
    const SpectrumReport conv = convert_report(rep, to);

    const std::size_t n = ts.size();
    const long long m = check_coherent_grid(ts, f0_hz).periods;
    BinBasis basis(n);
    std::vector<double> out(n, 0.0);

    auto add_line = [&](int k, double c, double s) {
        const std::size_t step = static_cast<std::size_t>((static_cast<long long>(k) * m) %
                                                          static_cast<long long>(n));
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += c * basis.cos_tab[idx] + s * basis.sin_tab[idx];
            idx += step;
            if (idx >= n) idx -= n;
        }
    };
    add_line(1, conv.fundamental_cos, conv.fundamental_sin);
    for (const auto& h : conv.harmonics) add_line(h.k, h.cos_coeff, h.sin_coeff);

    return TimeSeries{ts.sample_rate_hz, std::move(out), to, ts.t0_s};
}

DeviationReport deviation(const TimeSeries& measured, const TimeSeries& nominal, double f0_hz,
                          int n_harmonics) {
    require_same_grid(measured, nominal, "deviation");
    if (measured.unit != nominal.unit)
        throw std::invalid_argument("deviation: channel units differ");

    DeviationReport rep;
    std::vector<double> err(measured.size());
    for (std::size_t i = 0; i < err.size(); ++i)
        err[i] = measured.samples[i] - nominal.samples[i];
    rep.error = TimeSeries{measured.sample_rate_hz, std::move(err), measured.unit, measured.t0_s};
    rep.rms_m = rms(rep.error);
    rep.p2p_m = peak_to_peak(rep.error);

    const double mu = mean(rep.error.samples);
    long double ac_power = 0.0L;
    for (double x : rep.error.samples) {
        const double d = x - mu;
        ac_power += static_cast<long double>(d) * d;
    }
    ac_power /= static_cast<long double>(rep.error.size());

    if (ac_power > 0.0L) {
        const SpectrumReport lines = coherent_spectrum(rep.error, f0_hz, n_harmonics);
        long double harm_power = static_cast<long double>(lines.fundamental_amplitude) *
                                 lines.fundamental_amplitude / 2.0L;
        for (const auto& h : lines.harmonics)
            harm_power += static_cast<long double>(h.amplitude) * h.amplitude / 2.0L;
        rep.harmonic_power_fraction =
            std::clamp(static_cast<double>(harm_power / ac_power), 0.0, 1.0);
    }
    return rep;
}

TimeSeries magnify_deviation(const TimeSeries& nominal, const TimeSeries& measured, double k) {
    require_same_grid(nominal, measured, "magnify_deviation");
    if (measured.unit != nominal.unit)
        throw std::invalid_argument("magnify_deviation: channel units differ");
    std::vector<double> out(nominal.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = nominal.samples[i] + k * (measured.samples[i] - nominal.samples[i]);
    return TimeSeries{nominal.sample_rate_hz, std::move(out), nominal.unit, nominal.t0_s};
}

std::vector<std::pair<std::size_t, std::size_t>> stuck_intervals(
    const TimeSeries& measured_pos, const TimeSeries& ref_velocity, double vel_threshold_mps,
    std::size_t min_len) {
    require_same_grid(measured_pos, ref_velocity, "stuck_intervals");
    if (!(vel_threshold_mps > 0.0))
        throw std::invalid_argument("stuck_intervals: velocity threshold must be > 0");

    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t run_start = 0, run_len = 0;
    for (std::size_t i = 1; i < measured_pos.size(); ++i) {
        const bool frozen = measured_pos.samples[i] == measured_pos.samples[i - 1] &&
                            std::fabs(ref_velocity.samples[i]) > vel_threshold_mps;
        if (frozen) {
            if (run_len == 0) run_start = i;
            ++run_len;
        } else {
            if (run_len >= min_len) out.emplace_back(run_start, run_start + run_len);
            run_len = 0;
        }
    }
    if (run_len >= min_len) out.emplace_back(run_start, run_start + run_len);
    return out;
}

std::string report_json(const SpectrumReport& report) {
    nlohmann::json j;
    j["f0_hz"] = report.f0_hz;
    j["fundamental_amplitude"] = report.fundamental_amplitude;
    j["harmonics"] = nlohmann::json::array();
    for (const auto& h : report.harmonics)
        j["harmonics"].push_back({{"k", h.k}, {"amplitude", h.amplitude}, {"dbc", h.dbc}});
    j["thd_percent"] = report.thd_percent;
    j["snr_db"] = report.snr_db;
    j["residual_rms"] = report.residual_rms;
    return j.dump(2) + "\n";
}

std::string report_table(const SpectrumReport& report) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "coherent spectrum @ f0 = %g Hz  (%d harmonics, unit %s)\n",
                  report.f0_hz, report.n_harmonics, unit_name(report.unit));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  fundamental amplitude  %.6e %s\n",
                  report.fundamental_amplitude, unit_name(report.unit));
    out += buf;
    out += "   k        amplitude        dBc\n";
    for (const auto& h : report.harmonics) {
        std::snprintf(buf, sizeof(buf), "  %2d   %14.6e   %8.2f\n", h.k, h.amplitude, h.dbc);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "  THD  %.2g %%\n", report.thd_percent);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  SNR  %.1f dB\n", report.snr_db);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  residual rms  %.6e %s\n", report.residual_rms,
                  unit_name(report.unit));
    out += buf;
    return out;
}

std::string deviation_summary(const DeviationReport& report) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "deviation rms  %.6e %s\n", report.rms_m,
                  unit_name(report.error.unit));
    out += buf;
    std::snprintf(buf, sizeof(buf), "deviation p2p  %.6e %s\n", report.p2p_m,
                  unit_name(report.error.unit));
    out += buf;
    std::snprintf(buf, sizeof(buf), "harmonic power fraction  %.4f\n",
                  report.harmonic_power_fraction);
    out += buf;
    return out;
}

}  // namespace stagebench::analysis
