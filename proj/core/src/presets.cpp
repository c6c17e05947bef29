#include "dbeam/presets.hpp"

#include "dbeam/waveform.hpp"

#include <cmath>
#include <numbers>

namespace dbeam {

CrlbPreset crlb_two_node_preset(double c) {
    CrlbPreset p;
    p.name = "two-node";
    p.bandwidth_primary_hz = 11.0e6;
    WaveformSpec w = two_node_waveform();
    const double msbw_primary = msbw_analytic(w); // pi^2 * (11 MHz)^2
    const double msbw_alternate = 1.942e15;
    p.bandwidth_alternate_hz = std::sqrt(msbw_alternate) / std::numbers::pi;
    p.primary = crlb(msbw_primary, 30.0, 35.0, c);
    p.alternate = crlb(msbw_alternate, 30.0, 35.0, c);
    return p;
}

CrlbPreset crlb_three_node_preset(double c) {
    CrlbPreset p;
    p.name = "three-node";
    const double msbw_printed = 6.0547e14; // implies BW = 11 MHz
    WaveformSpec w = three_node_waveform(); // step-consistent BW = 9 MHz
    const double msbw_step_consistent = msbw_analytic(w);
    p.bandwidth_primary_hz = std::sqrt(msbw_printed / (msbw_step_consistent /
                                                       (w.bandwidth * w.bandwidth))) ;
    p.bandwidth_alternate_hz = w.bandwidth;
    p.primary = crlb(msbw_printed, 30.0, 38.0, c);
    p.alternate = crlb(msbw_step_consistent, 30.0, 38.0, c);
    return p;
}

} // namespace dbeam
