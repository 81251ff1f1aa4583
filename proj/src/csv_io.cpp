#include "stagebench/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stagebench::harness {

namespace {

void fmt17(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

void write_table(std::ostream& out, const std::string& fingerprint,
                 const std::vector<std::pair<std::string, const TimeSeries*>>& channels) {
    if (channels.empty()) throw std::invalid_argument("csv: no channels");
    const TimeSeries& first = *channels.front().second;
    for (const auto& [name, ts] : channels) {
        (void)name;
        if (ts->size() != first.size() || ts->sample_rate_hz != first.sample_rate_hz ||
            ts->t0_s != first.t0_s)
            throw std::invalid_argument("csv: channels must share one sample grid");
    }
    if (!fingerprint.empty()) out << "# fingerprint=" << fingerprint << "\n";
    out << "time_s";
    for (const auto& [name, ts] : channels) {
        (void)ts;
        out << "," << name;
    }
    out << "\n";
    std::string line;
    for (std::size_t i = 0; i < first.size(); ++i) {
        line.clear();
        fmt17(line, first.time_at(i));
        for (const auto& [name, ts] : channels) {
            (void)name;
            line += ',';
            fmt17(line, ts->samples[i]);
        }
        line += '\n';
        out << line;
    }
}

}  // namespace

void write_run_csv(const RunRecord& rec, const std::string& path) {
    auto out = open_out(path);
    write_table(out, rec.fingerprint,
                {{"ref_pos_m", &rec.ref_pos_m},
                 {"true_pos_m", &rec.true_pos_m},
                 {"enc_pos_m", &rec.enc_pos_m},
                 {"ldv_vel_mps", &rec.ldv_vel_mps},
                 {"dut_out", &rec.dut_out},
                 {"force_N", &rec.force_N}});
}

void write_channel_csv(const std::vector<std::pair<std::string, const TimeSeries*>>& channels,
                       const std::string& path) {
    auto out = open_out(path);
    write_table(out, "", channels);
}

bool ChannelTable::has(const std::string& name) const {
    for (const auto& n : names)
        if (n == name) return true;
    return false;
}

TimeSeries ChannelTable::series(const std::string& name) const {
    Unit unit = Unit::dimensionless;
    auto ends_with = [&](const char* suffix) {
        const std::string s(suffix);
        return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
    };
    if (name == "dut_out")
        unit = Unit::meter_per_s2;  // accelerometer by convention; override if needed
    else if (ends_with("_mps2"))
        unit = Unit::meter_per_s2;
    else if (ends_with("_mps"))
        unit = Unit::meter_per_s;
    else if (ends_with("_m"))
        unit = Unit::meter;
    else if (ends_with("_N"))
        unit = Unit::newton;
    return series(name, unit);
}

TimeSeries ChannelTable::series(const std::string& name, Unit unit) const {
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (names[c] == name)
            return TimeSeries{sample_rate_hz, columns[c], unit, t0_s};
    }
    throw std::invalid_argument("csv: no channel named '" + name + "'");
}

ChannelTable read_channel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("csv: cannot open '" + path + "'");

    ChannelTable table;
    std::string line;
    // leading comment lines; a fingerprint comment is preserved
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string tag = "# fingerprint=";
            if (line.rfind(tag, 0) == 0) table.fingerprint = line.substr(tag.size());
            continue;
        }
        break;
    }
    // header
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header.push_back(cell);
    }
    if (header.empty() || header.front() != "time_s")
        throw std::invalid_argument("csv: first column must be time_s");
    table.names.assign(header.begin() + 1, header.end());
    table.columns.assign(table.names.size(), {});

    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t col = 0, pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::invalid_argument("csv: bad numeric cell '" + cell + "'");
            if (col == 0)
                times.push_back(v);
            else if (col - 1 < table.columns.size())
                table.columns[col - 1].push_back(v);
            else
                throw std::invalid_argument("csv: row wider than header");
            ++col;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (col != header.size()) throw std::invalid_argument("csv: row narrower than header");
    }
    if (times.size() < 2) throw std::invalid_argument("csv: need at least two rows");

    table.t0_s = times.front();
    table.sample_rate_hz =
        static_cast<double>(times.size() - 1) / (times.back() - times.front());
    return table;
}

void write_history_csv(const servo::IlcHistory& history, const std::string& path) {
    auto out = open_out(path);
    out << "iteration,rms_error_m,p2p_error_m\n";
    std::string line;
    for (std::size_t i = 0; i < history.size(); ++i) {
        line = std::to_string(i + 1);
        line += ',';
        fmt17(line, history[i].rms_error_m);
        line += ',';
        fmt17(line, history[i].p2p_error_m);
        line += '\n';
        out << line;
    }
}

void write_magnified_csv(const TimeSeries& nominal, const TimeSeries& measured,
                         const TimeSeries& magnified, const std::string& path) {
    auto out = open_out(path);
    write_table(out, "",
                {{"nominal", &nominal}, {"measured", &measured}, {"magnified", &magnified}});
}

}  // namespace stagebench::harness
