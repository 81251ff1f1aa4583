// stagebench: simulation test bench for precision sine-motion stages and the
// harmonic-distortion analysis of inertial sensors riding on them.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stagebench/analysis.hpp"
#include "stagebench/config_io.hpp"
#include "stagebench/csv_io.hpp"
#include "stagebench/simulate.hpp"

namespace {

using namespace stagebench;

std::vector<double> parse_freq_list(const std::string& arg) {
    std::vector<double> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        const double f = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw std::invalid_argument("envelope: bad frequency '" + item + "'");
        out.push_back(f);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Unit unit_from_flag(const std::string& flag) {
    if (flag == "disp" || flag == "m") return Unit::meter;
    if (flag == "vel" || flag == "mps") return Unit::meter_per_s;
    if (flag == "acc" || flag == "mps2") return Unit::meter_per_s2;
    throw std::invalid_argument("unknown domain '" + flag + "' (use disp|vel|acc)");
}

void warn_on_contact(const harness::RunRecord& rec) {
    if (rec.stroke_contact)
        std::cerr << "warning: stage touched a stroke limit during the run\n";
}

int run(int argc, char** argv) {
    CLI::App app{"stagebench: precision stage simulation and distortion analysis"};
    app.require_subcommand(1);

    // envelope
    auto* envelope = app.add_subcommand("envelope", "stroke/frequency table for a target peak acceleration");
    double env_accel = 0.0;
    std::string env_freqs;
    envelope->add_option("--accel", env_accel, "peak acceleration, m/s^2")->required();
    envelope->add_option("--freqs", env_freqs, "comma-separated frequencies, Hz")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run one closed-loop scenario");
    std::string sim_config, sim_out;
    simulate->add_option("--config", sim_config, "scenario config file")->required();
    simulate->add_option("--out", sim_out, "output run CSV")->required();

    // preset
    auto* preset = app.add_subcommand("preset", "run a shipped calibrated scenario");
    std::string preset_name, preset_out, preset_history;
    preset->add_option("--name", preset_name, "fig2a_untuned | fig2b_tuned | fig3_ilc")->required();
    preset->add_option("--out", preset_out, "output run CSV")->required();
    preset->add_option("--history", preset_history, "learning history CSV (fig3_ilc)");

    // ilc
    auto* ilc = app.add_subcommand("ilc", "iterative learning refinement of a scenario");
    std::string ilc_config, ilc_history, ilc_out;
    ilc->add_option("--config", ilc_config, "scenario config file with an [ilc] section")->required();
    ilc->add_option("--history", ilc_history, "learning history CSV")->required();
    ilc->add_option("--out", ilc_out, "final-iteration run CSV")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "coherent harmonic analysis of one channel");
    std::string an_in, an_channel, an_convert, an_unit, an_json;
    double an_f0 = 0.0;
    int an_harmonics = 10;
    analyze->add_option("--in", an_in, "run CSV")->required();
    analyze->add_option("--channel", an_channel, "column name")->required();
    analyze->add_option("--f0", an_f0, "fundamental frequency, Hz")->required();
    analyze->add_option("--harmonics", an_harmonics, "harmonics to report (default 10)");
    analyze->add_option("--convert", an_convert, "convert report to disp|vel|acc");
    analyze->add_option("--unit", an_unit, "override channel domain: disp|vel|acc");
    analyze->add_option("--json", an_json, "write machine-readable report here");

    // deviation
    auto* deviation = app.add_subcommand("deviation", "tracking deviation of one channel against another");
    std::string dev_in, dev_measured, dev_nominal, dev_out;
    double dev_f0 = 0.0, dev_magnify = 0.0;
    int dev_harmonics = 10;
    deviation->add_option("--in", dev_in, "run CSV")->required();
    deviation->add_option("--measured", dev_measured, "measured column")->required();
    deviation->add_option("--nominal", dev_nominal, "nominal column")->required();
    deviation->add_option("--f0", dev_f0, "fundamental frequency, Hz")->required();
    deviation->add_option("--harmonics", dev_harmonics, "harmonics for the power fraction");
    auto* magnify_opt =
        deviation->add_option("--magnify", dev_magnify, "also emit a magnified trace with this factor");
    deviation->add_option("--out", dev_out, "plot-data CSV for --magnify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (envelope->parsed()) {
        const auto table = trajectory::envelope_table(env_accel, parse_freq_list(env_freqs));
        std::cout << trajectory::envelope_csv(table);
        return 0;
    }

    if (simulate->parsed()) {
        const auto scenario = harness::load_scenario_file(sim_config);
        const auto rec = harness::simulate(scenario);
        warn_on_contact(rec);
        harness::write_run_csv(rec, sim_out);
        std::cout << "fingerprint " << rec.fingerprint << "\n";
        return 0;
    }

    if (preset->parsed()) {
        const auto which = harness::preset_from_name(preset_name);
        const auto run = harness::run_preset(which);
        warn_on_contact(run.record);
        harness::write_run_csv(run.record, preset_out);
        if (!preset_history.empty()) {
            if (!run.ilc_history)
                throw std::invalid_argument("preset: --history is only valid for fig3_ilc");
            harness::write_history_csv(*run.ilc_history, preset_history);
        }
        std::cout << "fingerprint " << run.record.fingerprint << "\n";
        return 0;
    }

    if (ilc->parsed()) {
        const std::string text = read_file(ilc_config);
        const auto scenario = harness::scenario_from_config(text);
        const auto cfg = harness::ilc_from_config(text);
        if (!cfg) throw std::invalid_argument("ilc: config file lacks an [ilc] section");
        const auto history = servo::ilc_train(scenario, *cfg);
        harness::write_history_csv(history, ilc_history);
        const auto rec = harness::simulate(scenario, &history.back().command);
        warn_on_contact(rec);
        harness::write_run_csv(rec, ilc_out);
        std::printf("iterations %zu  final rms %.6e m  final p2p %.6e m\n", history.size(),
                    history.back().rms_error_m, history.back().p2p_error_m);
        return 0;
    }

    if (analyze->parsed()) {
        const auto table = harness::read_channel_csv(an_in);
        TimeSeries ts = an_unit.empty() ? table.series(an_channel)
                                        : table.series(an_channel, unit_from_flag(an_unit));
        auto report = analysis::coherent_spectrum(ts, an_f0, an_harmonics);
        if (!an_convert.empty())
            report = analysis::convert_report(report, unit_from_flag(an_convert));
        std::cout << analysis::report_table(report);
        if (!an_json.empty()) {
            std::ofstream out(an_json);
            if (!out) throw std::runtime_error("cannot open '" + an_json + "' for writing");
            out << analysis::report_json(report);
        }
        return 0;
    }

    if (deviation->parsed()) {
        const auto table = harness::read_channel_csv(dev_in);
        const TimeSeries measured = table.series(dev_measured);
        const TimeSeries nominal = table.series(dev_nominal);
        const auto rep = analysis::deviation(measured, nominal, dev_f0, dev_harmonics);
        std::cout << analysis::deviation_summary(rep);
        if (magnify_opt->count() > 0) {
            if (dev_out.empty())
                throw std::invalid_argument("deviation: --magnify needs --out for the plot data");
            const auto magnified = analysis::magnify_deviation(nominal, measured, dev_magnify);
            harness::write_magnified_csv(nominal, measured, magnified, dev_out);
        }
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
