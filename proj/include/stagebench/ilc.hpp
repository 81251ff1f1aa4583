#pragma once

#include <vector>

#include "stagebench/scenario.hpp"
#include "stagebench/timeseries.hpp"

namespace stagebench::servo {

/// P-type iterative learning control on a periodic reference:
///   u[k+1] = Q( u[k] + L * g_est * shift(e[k], lead) )
/// where e is the measured position error, g_est converts meters to newtons,
/// shift is circular (the reference repeats), and Q is an exact zero-phase
/// low-pass applied in the frequency domain of the batch (bins at or below
/// q_cutoff_hz pass unchanged, bins above are removed).
struct IlcConfig {
    double learning_gain = 0.5;             // L, dimensionless, 0 <= L <= 2
    int lead_samples = 0;                   // non-causal shift applied to the error
    double q_cutoff_hz = 500.0;             // must stay below Nyquist of the batch
    int max_iterations = 10;
    double stop_rms_m = 0.0;                // stop early once rms error falls below
    double plant_gain_estimate_N_per_m = 1.0;  // force-per-meter equivalent at f0

    void validate(double sample_rate_hz) const;
};

struct IlcIteration {
    double rms_error_m = 0.0;
    double p2p_error_m = 0.0;
    TimeSeries command;  // feedforward force applied during this iteration
};

using IlcHistory = std::vector<IlcIteration>;

/// Exact zero-phase low-pass over one periodic batch (see IlcConfig).
TimeSeries zero_phase_lowpass(const TimeSeries& ts, double cutoff_hz);

/// One learning update. u and e must share length and rate; u is a force [N],
/// e a position error [m].
TimeSeries ilc_update(const TimeSeries& u, const TimeSeries& e, const IlcConfig& cfg,
                      double plant_gain_estimate_N_per_m);

/// Repeated batch refinement: simulate, record, update, until max_iterations
/// or the stop threshold. Entry i holds the error stats of iteration i and the
/// command that produced them (entry 1 is the plain servo, u = 0). Learning
/// uses the encoder-measured error; the recorded statistics are of the true
/// tracking error. Throws on divergence (rms growing 10x over 3 iterations).
IlcHistory ilc_train(const harness::StageScenario& scenario, const IlcConfig& cfg);

}  // namespace stagebench::servo
