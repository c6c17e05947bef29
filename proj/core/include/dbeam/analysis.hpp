#pragma once

#include "dbeam/channel.hpp"

#include <cstdint>
#include <vector>

namespace dbeam {

/// Delay-estimation lower bound and the quantities derived from it.
struct CrlbReport {
    double msbw = 0.0;                // rad^2/s^2, as used
    double snr_db = 0.0;              // pre-processing
    double processing_gain_db = 0.0;
    double post_snr_db = 0.0;
    double delay_variance = 0.0;      // s^2, var(tau)
    double range_std = 0.0;           // m, two-way convention: (c/2) * sigma_tau
    double max_frequency = 0.0;       // Hz, c / (20 * range_std)
};

/// P(G_c >= threshold) versus range-error standard deviation, end-fire.
struct GainCurve {
    std::vector<double> sigma_d_over_lambda;
    std::vector<double> probability;
    std::uint32_t n_nodes = 0;
    double threshold = 0.9;
    std::uint32_t trials = 0;
    std::uint64_t seed = 0;
};

/// var(tau) >= 1/(msbw * SNR_post); range_std = (c/2) sqrt(var);
/// f_max = c/(20 range_std).
CrlbReport crlb(double msbw, double snr_db, double processing_gain_db,
                double c = kSpeedOfLight);

/// Matched-filter processing gain: 10 log10(N * T_r * BW_n) dB.
double processing_gain_db(std::uint32_t n_pulses, double t_r, double noise_bw);

/// Monte-Carlo sweep of P(G_c >= threshold) over a grid of sigma_d/lambda.
/// Per-node range errors are i.i.d. zero-mean Gaussians; each (grid point,
/// trial) draws from a seed derived from the master seed, so results are
/// independent of evaluation order or parallel chunking.
GainCurve gain_probability_sweep(std::uint32_t n_nodes,
                                 const std::vector<double>& sigma_d_over_lambda,
                                 double threshold, std::uint32_t trials,
                                 std::uint64_t seed);

/// Default sweep grid: n log-spaced points in [1/200, 1/2] (units of lambda).
std::vector<double> default_sigma_grid(std::size_t n = 50);

} // namespace dbeam
