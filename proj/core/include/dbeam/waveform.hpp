#pragma once

#include "dbeam/signal.hpp"

#include <cstdint>
#include <vector>

namespace dbeam {

/// Parameters of the two-tone stepped-frequency waveform: N pulses of period
/// `pulse_period`, active for `duty_cycle` of each period. Pulse k carries the
/// tone pair (f1, f2) = (f1, f1 + N*step) offset by order[k]*step.
struct WaveformSpec {
    std::uint32_t n_pulses = 1;   // N
    double f1 = 0.0;              // lower tone of the first pulse, Hz
    double delta_f_step = 0.0;    // frequency step between pulses, Hz
    double duty_cycle = 1.0;      // (0, 1]
    double pulse_period = 0.0;    // T, s
    double sample_rate = 0.0;     // Hz
    double bandwidth = 0.0;       // BW, Hz

    double delta_f_total() const { return n_pulses * delta_f_step; } // N*step
    double f2() const { return f1 + delta_f_total(); }
    double active_duration() const { return pulse_period * duty_cycle; } // T_r
    double highest_tone() const {
        return f2() + (n_pulses - 1) * delta_f_step;
    }
};

/// Per-node transmit order of the N frequency steps. Distinct nodes get
/// distinct permutations so simultaneous returns can be separated.
struct PulseSignature {
    std::uint32_t node_index = 1; // 1-based
    std::vector<std::uint32_t> pulse_order;
};

/// n! saturating at uint64 max.
std::uint64_t factorial(std::uint32_t n);

/// Checks type invariants plus the signature-capacity rule N! >= n_connections
/// and the Nyquist bound on the highest occupied tone. Returns the spec
/// unchanged; throws std::invalid_argument on violation.
WaveformSpec validate_spec(const WaveformSpec& spec, std::uint64_t n_connections);

/// Frequency step for a target total bandwidth: step = BW / (2N - 1).
double derive_step(double bandwidth, std::uint32_t n_pulses);

/// Deterministic signature assignment: node 1 ascending, node 2 descending,
/// nodes >= 3 take lexicographically-next unused permutations.
PulseSignature signature_for_node(std::uint32_t node_index, std::uint32_t n_pulses);

/// Samples the waveform in complex baseband, phase-continuous across pulses,
/// with the 1/N amplitude factor applied.
SignalBuffer synthesize(const WaveformSpec& spec, const PulseSignature& sig);

/// Closed-form mean-squared bandwidth (rad^2/s^2) of the TTSFW, taken about
/// the band center:
///   pi^2 (BW/(2-1/N))^2 + (2 pi BW)^2 / (N (4N^2+4N+1)) * sum n^2
double msbw_analytic(const WaveformSpec& spec);

/// Discrete evaluation of the spectral second moment
///   sum (2 pi f_k)^2 |S_k|^2 / sum |S_k|^2
/// over the sampled spectrum, f_k as signed baseband offsets.
double msbw_numeric(const SignalBuffer& signal);

/// Reference parameter sets used throughout: a single-pulse pair at
/// 0.5/11.5 MHz (T_r = 250 us) and a five-pulse set at 0.5/5.5 MHz with
/// 1 MHz steps, both sampled at 25 MHz.
WaveformSpec two_node_waveform();
WaveformSpec three_node_waveform();

} // namespace dbeam
