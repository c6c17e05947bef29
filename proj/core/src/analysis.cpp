#include "dbeam/analysis.hpp"

#include "dbeam/beamform.hpp"
#include "dbeam/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dbeam {

using std::numbers::pi;

CrlbReport crlb(double msbw, double snr_db, double processing_gain_db, double c) {
    if (!(msbw > 0.0)) throw std::invalid_argument("msbw must be positive");
    CrlbReport r;
    r.msbw = msbw;
    r.snr_db = snr_db;
    r.processing_gain_db = processing_gain_db;
    r.post_snr_db = snr_db + processing_gain_db;
    const double snr_lin = std::pow(10.0, r.post_snr_db / 10.0);
    r.delay_variance = 1.0 / (msbw * snr_lin);
    r.range_std = 0.5 * c * std::sqrt(r.delay_variance);
    r.max_frequency = c / (20.0 * r.range_std);
    return r;
}

double processing_gain_db(std::uint32_t n_pulses, double t_r, double noise_bw) {
    if (n_pulses < 1 || !(t_r > 0.0) || !(noise_bw > 0.0))
        throw std::invalid_argument("processing_gain: inputs must be positive");
    return 10.0 * std::log10(n_pulses * t_r * noise_bw);
}

GainCurve gain_probability_sweep(std::uint32_t n_nodes,
                                 const std::vector<double>& sigma_d_over_lambda,
                                 double threshold, std::uint32_t trials,
                                 std::uint64_t seed) {
    if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("threshold must be in (0, 1]");

    GainCurve curve;
    curve.sigma_d_over_lambda = sigma_d_over_lambda;
    curve.n_nodes = n_nodes;
    curve.threshold = threshold;
    curve.trials = trials;
    curve.seed = seed;
    curve.probability.resize(sigma_d_over_lambda.size());

    std::vector<NodeEmission> erred(n_nodes);
    const std::vector<NodeEmission> ideal(n_nodes);
    for (std::size_t gi = 0; gi < sigma_d_over_lambda.size(); ++gi) {
        const double phase_std = 2.0 * pi * sigma_d_over_lambda[gi];
        std::uint64_t hits = 0;
        for (std::uint32_t t = 0; t < trials; ++t) {
            Rng rng(derive_seed(seed, gi, t));
            for (std::uint32_t k = 0; k < n_nodes; ++k)
                erred[k].phase_offset = phase_std * rng.gaussian();
            const GainResult g = coherent_gain(erred, ideal, 1.0e9);
            if (g.coherent_gain >= threshold) ++hits;
        }
        curve.probability[gi] = static_cast<double>(hits) / trials;
    }
    return curve;
}

std::vector<double> default_sigma_grid(std::size_t n) {
    std::vector<double> grid(n);
    const double lo = std::log(1.0 / 200.0);
    const double hi = std::log(0.5);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
        grid[i] = std::exp(lo + f * (hi - lo));
    }
    return grid;
}

} // namespace dbeam
