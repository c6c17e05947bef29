// Test-only reference implementations, kept independent of the library's
// estimation paths so they can serve as oracles.
#pragma once

#include "dbeam/fft.hpp"
#include "dbeam/ranging.hpp"
#include "dbeam/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracles {

/// Peak delay (seconds) of a correlation by dense FFT-zero-padded upsampling:
/// the spectrum is zero-padded by `factor` and the argmax of the upsampled
/// magnitude returned. Independent of the windowed-sinc + spline route.
inline double fft_upsample_peak(const dbeam::CorrelationBuffer& corr,
                                std::size_t factor = 512) {
    using namespace dbeam;
    const std::size_t n = corr.complex_values.size();
    const std::size_t m = fft::next_pow2(n);
    std::vector<cplx> padded(m, cplx(0.0, 0.0));
    std::copy(corr.complex_values.begin(), corr.complex_values.end(), padded.begin());
    auto spec = fft::fft(padded);

    const std::size_t big = m * factor;
    std::vector<cplx> up(big, cplx(0.0, 0.0));
    // split the spectrum at the Nyquist bin
    for (std::size_t k = 0; k < m / 2; ++k) up[k] = spec[k];
    for (std::size_t k = m / 2; k < m; ++k) up[big - m + k] = spec[k];
    auto dense = fft::ifft(up);

    std::size_t best = 0;
    double best_v = -1.0;
    const std::size_t limit = n * factor; // original support only
    for (std::size_t i = 0; i < limit; ++i) {
        const double v = std::abs(dense[i]);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    const double idx = static_cast<double>(best) / factor;
    return corr.first_lag_s + idx * corr.lag_step_s;
}

/// P(Gc >= threshold) for a two-node array with i.i.d. Gaussian range errors,
/// by 1-D quadrature of the closed form cos^2(dphi/2) against the Gaussian
/// density of the phase difference (Simpson's rule over +-12 sigma).
inline double two_node_probability(double sigma_over_lambda, double threshold) {
    const double pi = std::numbers::pi;
    const double s = std::sqrt(2.0) * 2.0 * pi * sigma_over_lambda;
    if (s == 0.0) return 1.0;
    const std::size_t n = 40001;
    const double lo = -12.0 * s, hi = 12.0 * s;
    const double h = (hi - lo) / (n - 1);
    auto f = [&](double x) {
        const double c = std::cos(0.5 * x);
        const double gc = c * c;
        const double dens = std::exp(-0.5 * x * x / (s * s)) /
                            (s * std::sqrt(2.0 * pi));
        return (gc >= threshold) ? dens : 0.0;
    };
    double acc = f(lo) + f(hi);
    for (std::size_t i = 1; i + 1 < n; ++i)
        acc += f(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
    return std::min(1.0, acc * h / 3.0);
}

/// Sample standard deviation.
inline double stddev(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return std::sqrt(var / (xs.size() - 1));
}

} // namespace oracles
