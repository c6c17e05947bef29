#pragma once

#include "dbeam/analysis.hpp"

namespace dbeam {

/// Delay-bound chain for a reference waveform, carrying both mean-squared
/// bandwidth readings where the source material is self-inconsistent: the
/// value consistent with the stated tone span, and the alternate printed
/// constant (each implies a different total bandwidth).
struct CrlbPreset {
    const char* name;
    CrlbReport primary;
    CrlbReport alternate;
    double bandwidth_primary_hz;
    double bandwidth_alternate_hz;
};

/// Single-pulse pair, BW 11 MHz, T_r 250 us: msbw = pi^2 BW^2 = 1.194e15,
/// gain 35 dB at 30 dB SNR. Alternate: printed msbw 1.942e15 (implies
/// BW = 14.03 MHz).
CrlbPreset crlb_two_node_preset(double c = kSpeedOfLight);

/// Five pulses, 1 MHz steps, N*T_r 500 us: uses the printed msbw 6.0547e14
/// (implies BW = 11 MHz), gain 38 dB at 30 dB SNR. Alternate: the closed form
/// with the step-consistent BW = 9 MHz gives 4.054e14.
CrlbPreset crlb_three_node_preset(double c = kSpeedOfLight);

} // namespace dbeam
