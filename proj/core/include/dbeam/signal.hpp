#pragma once

#include <complex>
#include <vector>

namespace dbeam {

using cplx = std::complex<double>;

/// Uniformly sampled complex baseband signal.
struct SignalBuffer {
    std::vector<cplx> samples;
    double sample_rate = 0.0; // Hz
    double start_time = 0.0;  // s

    std::size_t size() const { return samples.size(); }
    double duration() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

/// Mean |s|^2 over the active (nonzero) samples.
double active_power(const SignalBuffer& s);

/// Total sum of |s|^2.
double energy(const SignalBuffer& s);

/// Copy with `extra` zero samples appended.
SignalBuffer extend(const SignalBuffer& s, std::size_t extra);

/// Band-limited evaluation of a sampled sequence at a fractional index, by
/// Kaiser-windowed sinc interpolation. Samples outside [0, n) read as zero.
cplx bl_interp(const std::vector<cplx>& y, double tau);

} // namespace dbeam
