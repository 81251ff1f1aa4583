#include "stagebench/config_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stagebench::harness {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

Sections parse_sections(const std::string& text) {
    static const std::set<std::string> known = {"profile", "plant",      "friction",
                                                "servo",   "encoder",    "vibrometer",
                                                "dut",     "sim",        "ilc"};
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known.count(section))
                throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                            ": unknown section [" + section + "]");
            if (out.count(section))
                throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                            ": duplicate section [" + section + "]");
            out[section];  // allow empty sections
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected key = value inside a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": empty key or value");
        if (!out[section].emplace(key, value).second)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");
    }
    return out;
}

/// Tracks which keys were consumed so typos are rejected.
class SectionReader {
  public:
    SectionReader(const Sections& all, const std::string& name) : name_(name) {
        auto it = all.find(name);
        if (it != all.end()) section_ = &it->second;
    }

    bool present() const { return section_ != nullptr; }

    double number(const std::string& key) {
        return parse_number(require(key), key);
    }
    double number_or(const std::string& key, double fallback) {
        const std::string* v = lookup(key);
        return v ? parse_number(*v, key) : fallback;
    }
    std::uint64_t integer(const std::string& key) {
        return parse_integer(require(key), key);
    }
    std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) {
        const std::string* v = lookup(key);
        return v ? parse_integer(*v, key) : fallback;
    }
    std::string text(const std::string& key) { return require(key); }
    bool has(const std::string& key) const {
        return section_ && section_->count(key) > 0;
    }

    void finish() const {
        if (!section_) return;
        for (const auto& [key, value] : *section_) {
            (void)value;
            if (!used_.count(key))
                throw std::invalid_argument("config: unknown key '" + key + "' in [" + name_ +
                                            "]");
        }
    }

  private:
    const std::string* lookup(const std::string& key) {
        if (!section_) return nullptr;
        auto it = section_->find(key);
        if (it == section_->end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }
    std::string require(const std::string& key) {
        const std::string* v = lookup(key);
        if (!v)
            throw std::invalid_argument("config: missing key '" + key + "' in [" + name_ + "]");
        return *v;
    }
    double parse_number(const std::string& v, const std::string& key) const {
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
            throw std::invalid_argument("config: key '" + key + "' in [" + name_ +
                                        "]: not a finite number: '" + v + "'");
        return x;
    }
    std::uint64_t parse_integer(const std::string& v, const std::string& key) const {
        char* end = nullptr;
        const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0')
            throw std::invalid_argument("config: key '" + key + "' in [" + name_ +
                                        "]: not an integer: '" + v + "'");
        return x;
    }

    std::string name_;
    const Section* section_ = nullptr;
    std::set<std::string> used_;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

StageScenario scenario_from_config(const std::string& text) {
    const Sections sections = parse_sections(text);
    StageScenario s;

    SectionReader profile(sections, "profile");
    if (!profile.present()) throw std::invalid_argument("config: missing [profile] section");
    s.profile.frequency_hz = profile.number("frequency_hz");
    s.profile.amplitude_m = profile.number("amplitude_m");
    s.profile.phase_rad = profile.number_or("phase_rad", 0.0);
    s.profile.offset_m = profile.number_or("offset_m", 0.0);
    if (profile.has("capture_periods")) {
        const double periods = profile.number("capture_periods");
        s.profile.duration_s = periods / s.profile.frequency_hz;
        if (profile.has("duration_s"))
            throw std::invalid_argument(
                "config: [profile] takes either duration_s or capture_periods, not both");
    } else {
        s.profile.duration_s = profile.number("duration_s");
    }
    s.profile.sample_rate_hz = profile.number("sample_rate_hz");
    profile.finish();

    SectionReader plant(sections, "plant");
    if (!plant.present()) throw std::invalid_argument("config: missing [plant] section");
    s.plant.moving_mass_kg = plant.number("moving_mass_kg");
    s.plant.viscous_damping_N_s_per_m = plant.number("viscous_damping_N_s_per_m");
    s.plant.cable_stiffness_N_per_m = plant.number("cable_stiffness_N_per_m");
    s.plant.stroke_limit_m = plant.number("stroke_limit_m");
    s.plant.max_force_N = plant.number("max_force_N");
    plant.finish();

    SectionReader friction(sections, "friction");
    if (!friction.present()) throw std::invalid_argument("config: missing [friction] section");
    s.friction.coulomb_N = friction.number("coulomb_N");
    s.friction.breakaway_N = friction.number("breakaway_N");
    s.friction.stribeck_velocity_mps = friction.number("stribeck_velocity_mps");
    s.friction.stick_band_mps = friction.number("stick_band_mps");
    friction.finish();

    SectionReader servo(sections, "servo");
    if (!servo.present()) throw std::invalid_argument("config: missing [servo] section");
    s.servo.kp = servo.number("kp");
    s.servo.ki = servo.number("ki");
    s.servo.kd = servo.number("kd");
    s.servo.accel_ff = servo.number("accel_ff");
    s.servo.control_rate_hz = servo.number("control_rate_hz");
    s.servo.output_limit_N = servo.number("output_limit_N");
    servo.finish();

    SectionReader encoder(sections, "encoder");
    if (!encoder.present()) throw std::invalid_argument("config: missing [encoder] section");
    s.encoder.resolution_m = encoder.number("resolution_m");
    s.encoder.abbe_offset_m = encoder.number_or("abbe_offset_m", 0.0);
    s.encoder.tilt_amplitude_rad = encoder.number_or("tilt_amplitude_rad", 0.0);
    s.encoder.tilt_period_m = encoder.number_or("tilt_period_m", 1.0);
    s.encoder.noise.sigma = encoder.number_or("noise_sigma_m", 0.0);
    s.encoder.noise.seed = encoder.integer_or("noise_seed", 0);
    encoder.finish();

    SectionReader vib(sections, "vibrometer");
    if (!vib.present()) throw std::invalid_argument("config: missing [vibrometer] section");
    s.vibrometer.gain_error = vib.number_or("gain_error", 0.0);
    s.vibrometer.bandwidth_hz = vib.number("bandwidth_hz");
    s.vibrometer.noise.sigma = vib.number_or("noise_sigma_mps", 0.0);
    s.vibrometer.noise.seed = vib.integer_or("noise_seed", 0);
    vib.finish();

    SectionReader dut(sections, "dut");
    if (dut.present()) {
        sensors::DutModel d;
        const std::string kind = dut.text("kind");
        if (kind == "accelerometer")
            d.kind = sensors::DutKind::accelerometer;
        else if (kind == "geophone")
            d.kind = sensors::DutKind::geophone;
        else
            throw std::invalid_argument(
                "config: [dut] kind must be accelerometer or geophone");
        d.natural_freq_hz = dut.number("natural_freq_hz");
        d.damping_ratio = dut.number("damping_ratio");
        d.sensitivity = dut.number_or("sensitivity", 1.0);
        d.c2 = dut.number_or("c2", 0.0);
        d.c3 = dut.number_or("c3", 0.0);
        d.adc_bits = static_cast<int>(dut.integer_or("adc_bits", 24));
        d.full_scale = dut.number_or("full_scale", 20.0);
        d.noise.sigma = dut.number_or("noise_sigma", 0.0);
        d.noise.seed = dut.integer_or("noise_seed", 0);
        dut.finish();
        s.dut = d;
    }

    SectionReader sim(sections, "sim");
    if (!sim.present()) throw std::invalid_argument("config: missing [sim] section");
    s.sim_dt_s = sim.number("dt_s");
    s.seed = sim.integer("seed");
    s.settle_periods = static_cast<int>(sim.integer_or("settle_periods", 2));
    sim.finish();

    s.validate();
    return s;
}

StageScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_config(buf.str());
}

std::string scenario_to_config(const StageScenario& s) {
    std::ostringstream out;
    out << "[profile]\n";
    out << "frequency_hz = " << fmt(s.profile.frequency_hz) << "\n";
    out << "amplitude_m = " << fmt(s.profile.amplitude_m) << "\n";
    out << "phase_rad = " << fmt(s.profile.phase_rad) << "\n";
    out << "offset_m = " << fmt(s.profile.offset_m) << "\n";
    out << "duration_s = " << fmt(s.profile.duration_s) << "\n";
    out << "sample_rate_hz = " << fmt(s.profile.sample_rate_hz) << "\n";
    out << "\n[plant]\n";
    out << "moving_mass_kg = " << fmt(s.plant.moving_mass_kg) << "\n";
    out << "viscous_damping_N_s_per_m = " << fmt(s.plant.viscous_damping_N_s_per_m) << "\n";
    out << "cable_stiffness_N_per_m = " << fmt(s.plant.cable_stiffness_N_per_m) << "\n";
    out << "stroke_limit_m = " << fmt(s.plant.stroke_limit_m) << "\n";
    out << "max_force_N = " << fmt(s.plant.max_force_N) << "\n";
    out << "\n[friction]\n";
    out << "coulomb_N = " << fmt(s.friction.coulomb_N) << "\n";
    out << "breakaway_N = " << fmt(s.friction.breakaway_N) << "\n";
    out << "stribeck_velocity_mps = " << fmt(s.friction.stribeck_velocity_mps) << "\n";
    out << "stick_band_mps = " << fmt(s.friction.stick_band_mps) << "\n";
    out << "\n[servo]\n";
    out << "kp = " << fmt(s.servo.kp) << "\n";
    out << "ki = " << fmt(s.servo.ki) << "\n";
    out << "kd = " << fmt(s.servo.kd) << "\n";
    out << "accel_ff = " << fmt(s.servo.accel_ff) << "\n";
    out << "control_rate_hz = " << fmt(s.servo.control_rate_hz) << "\n";
    out << "output_limit_N = " << fmt(s.servo.output_limit_N) << "\n";
    out << "\n[encoder]\n";
    out << "resolution_m = " << fmt(s.encoder.resolution_m) << "\n";
    out << "abbe_offset_m = " << fmt(s.encoder.abbe_offset_m) << "\n";
    out << "tilt_amplitude_rad = " << fmt(s.encoder.tilt_amplitude_rad) << "\n";
    out << "tilt_period_m = " << fmt(s.encoder.tilt_period_m) << "\n";
    out << "noise_sigma_m = " << fmt(s.encoder.noise.sigma) << "\n";
    out << "noise_seed = " << s.encoder.noise.seed << "\n";
    out << "\n[vibrometer]\n";
    out << "gain_error = " << fmt(s.vibrometer.gain_error) << "\n";
    out << "bandwidth_hz = " << fmt(s.vibrometer.bandwidth_hz) << "\n";
    out << "noise_sigma_mps = " << fmt(s.vibrometer.noise.sigma) << "\n";
    out << "noise_seed = " << s.vibrometer.noise.seed << "\n";
    if (s.dut) {
        out << "\n[dut]\n";
        out << "kind = "
            << (s.dut->kind == sensors::DutKind::accelerometer ? "accelerometer" : "geophone")
            << "\n";
        out << "natural_freq_hz = " << fmt(s.dut->natural_freq_hz) << "\n";
        out << "damping_ratio = " << fmt(s.dut->damping_ratio) << "\n";
        out << "sensitivity = " << fmt(s.dut->sensitivity) << "\n";
        out << "c2 = " << fmt(s.dut->c2) << "\n";
        out << "c3 = " << fmt(s.dut->c3) << "\n";
        out << "adc_bits = " << s.dut->adc_bits << "\n";
        out << "full_scale = " << fmt(s.dut->full_scale) << "\n";
        out << "noise_sigma = " << fmt(s.dut->noise.sigma) << "\n";
        out << "noise_seed = " << s.dut->noise.seed << "\n";
    }
    out << "\n[sim]\n";
    out << "dt_s = " << fmt(s.sim_dt_s) << "\n";
    out << "seed = " << s.seed << "\n";
    out << "settle_periods = " << s.settle_periods << "\n";
    return out.str();
}

std::optional<servo::IlcConfig> ilc_from_config(const std::string& text) {
    const Sections sections = parse_sections(text);
    SectionReader ilc(sections, "ilc");
    if (!ilc.present()) return std::nullopt;
    servo::IlcConfig cfg;
    cfg.learning_gain = ilc.number("learning_gain");
    cfg.lead_samples = static_cast<int>(ilc.integer_or("lead_samples", 0));
    cfg.q_cutoff_hz = ilc.number("q_cutoff_hz");
    cfg.max_iterations = static_cast<int>(ilc.integer("max_iterations"));
    cfg.stop_rms_m = ilc.number_or("stop_rms_m", 0.0);
    cfg.plant_gain_estimate_N_per_m = ilc.number("plant_gain_estimate_N_per_m");
    ilc.finish();
    return cfg;
}

std::string ilc_to_config(const servo::IlcConfig& cfg) {
    std::ostringstream out;
    out << "\n[ilc]\n";
    out << "learning_gain = " << fmt(cfg.learning_gain) << "\n";
    out << "lead_samples = " << cfg.lead_samples << "\n";
    out << "q_cutoff_hz = " << fmt(cfg.q_cutoff_hz) << "\n";
    out << "max_iterations = " << cfg.max_iterations << "\n";
    out << "stop_rms_m = " << fmt(cfg.stop_rms_m) << "\n";
    out << "plant_gain_estimate_N_per_m = " << fmt(cfg.plant_gain_estimate_N_per_m) << "\n";
    return out.str();
}

std::string scenario_fingerprint(const StageScenario& s) {
    const std::string text = scenario_to_config(s);
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a 64
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace stagebench::harness
