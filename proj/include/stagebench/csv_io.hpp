#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stagebench/ilc.hpp"
#include "stagebench/scenario.hpp"

namespace stagebench::harness {

/// Run CSVs carry an optional leading `# fingerprint=...` comment, then a
/// mandatory header row, then one row per sample. Values are printed with 17
/// significant digits, '.' decimal separator, '\n' line endings. Column order
/// for run records is fixed:
///   time_s,ref_pos_m,true_pos_m,enc_pos_m,ldv_vel_mps,dut_out,force_N
void write_run_csv(const RunRecord& rec, const std::string& path);

/// Generic channel table (shared grid), written as time_s plus named columns.
void write_channel_csv(const std::vector<std::pair<std::string, const TimeSeries*>>& channels,
                       const std::string& path);

struct ChannelTable {
    double sample_rate_hz = 0.0;
    double t0_s = 0.0;
    std::vector<std::string> names;              // excluding time_s
    std::vector<std::vector<double>> columns;    // same order as names
    std::string fingerprint;

    /// Column as a TimeSeries; the unit is inferred from the column name
    /// (_m, _mps, _mps2, _N suffixes; dut_out defaults to acceleration).
    TimeSeries series(const std::string& name) const;
    TimeSeries series(const std::string& name, Unit unit) const;
    bool has(const std::string& name) const;
};

ChannelTable read_channel_csv(const std::string& path);

/// `iteration,rms_error_m,p2p_error_m`, one row per recorded iteration.
void write_history_csv(const servo::IlcHistory& history, const std::string& path);

/// Plot data for deviation figures: time_s,nominal,measured,magnified.
void write_magnified_csv(const TimeSeries& nominal, const TimeSeries& measured,
                         const TimeSeries& magnified, const std::string& path);

}  // namespace stagebench::harness
