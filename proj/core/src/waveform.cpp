#include "dbeam/waveform.hpp"

#include "dbeam/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dbeam {

using std::numbers::pi;

std::uint64_t factorial(std::uint32_t n) {
    std::uint64_t f = 1;
    for (std::uint32_t k = 2; k <= n; ++k) {
        if (f > std::numeric_limits<std::uint64_t>::max() / k)
            return std::numeric_limits<std::uint64_t>::max();
        f *= k;
    }
    return f;
}

WaveformSpec validate_spec(const WaveformSpec& spec, std::uint64_t n_connections) {
    if (spec.n_pulses < 1) throw std::invalid_argument("n_pulses must be >= 1");
    if (!(spec.f1 > 0.0)) throw std::invalid_argument("f1 must be positive");
    if (spec.delta_f_step < 0.0)
        throw std::invalid_argument("delta_f_step must be non-negative");
    if (spec.delta_f_step == 0.0 && spec.n_pulses != 1)
        throw std::invalid_argument("delta_f_step may be zero only for a single pulse");
    if (!(spec.duty_cycle > 0.0 && spec.duty_cycle <= 1.0))
        throw std::invalid_argument("duty_cycle must be in (0, 1]");
    if (!(spec.pulse_period > 0.0))
        throw std::invalid_argument("pulse_period must be positive");
    if (!(spec.sample_rate > 0.0))
        throw std::invalid_argument("sample_rate must be positive");
    if (spec.bandwidth < 0.0)
        throw std::invalid_argument("bandwidth must be non-negative");
    if (!(spec.highest_tone() < spec.sample_rate / 2.0))
        throw std::invalid_argument(
            "highest occupied tone " + std::to_string(spec.highest_tone()) +
            " Hz violates Nyquist for sample rate " +
            std::to_string(spec.sample_rate) + " Hz");
    if (factorial(spec.n_pulses) < n_connections)
        throw std::invalid_argument(
            "N! = " + std::to_string(factorial(spec.n_pulses)) +
            " gives too few pulse signatures for " +
            std::to_string(n_connections) + " connections");
    return spec;
}

double derive_step(double bandwidth, std::uint32_t n_pulses) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
    if (n_pulses < 1) throw std::invalid_argument("n_pulses must be >= 1");
    return bandwidth / (2.0 * n_pulses - 1.0);
}

PulseSignature signature_for_node(std::uint32_t node_index, std::uint32_t n_pulses) {
    if (node_index < 1) throw std::invalid_argument("node_index is 1-based");
    const std::uint64_t capacity = factorial(n_pulses);
    if (node_index > capacity)
        throw std::invalid_argument("node_index exceeds N! available signatures");

    std::vector<std::uint32_t> order(n_pulses);
    for (std::uint32_t i = 0; i < n_pulses; ++i) order[i] = i;
    PulseSignature sig{node_index, order};
    if (node_index == 1) return sig;

    std::reverse(sig.pulse_order.begin(), sig.pulse_order.end());
    if (node_index == 2) return sig;

    // nodes >= 3: lexicographically-next permutations, skipping the
    // ascending and descending orders already assigned
    std::vector<std::uint32_t> p(order);
    std::uint32_t assigned = 2;
    while (std::next_permutation(p.begin(), p.end())) {
        if (std::is_sorted(p.rbegin(), p.rend())) continue; // descending, taken
        if (++assigned == node_index) {
            sig.pulse_order = p;
            return sig;
        }
    }
    throw std::logic_error("signature enumeration exhausted");
}

SignalBuffer synthesize(const WaveformSpec& spec, const PulseSignature& sig) {
    if (sig.pulse_order.size() != spec.n_pulses)
        throw std::invalid_argument("signature length does not match n_pulses");
    {
        std::vector<bool> seen(spec.n_pulses, false);
        for (std::uint32_t v : sig.pulse_order) {
            if (v >= spec.n_pulses || seen[v])
                throw std::invalid_argument("pulse_order is not a permutation");
            seen[v] = true;
        }
    }

    const double fs = spec.sample_rate;
    const auto total = static_cast<std::size_t>(
        std::llround(spec.n_pulses * spec.pulse_period * fs));
    SignalBuffer out;
    out.sample_rate = fs;
    out.samples.assign(total, cplx(0.0, 0.0));

    const double amp = 1.0 / spec.n_pulses;
    for (std::uint32_t k = 0; k < spec.n_pulses; ++k) {
        const double offset = sig.pulse_order[k] * spec.delta_f_step;
        const double f_lo = spec.f1 + offset;
        const double f_hi = spec.f2() + offset;
        const auto i0 = static_cast<std::size_t>(std::llround(k * spec.pulse_period * fs));
        const auto i1 = std::min(total, static_cast<std::size_t>(std::llround(
                                            (k * spec.pulse_period +
                                             spec.active_duration()) * fs)));
        for (std::size_t i = i0; i < i1; ++i) {
            const double t = static_cast<double>(i) / fs;
            const double a = 2.0 * pi * f_lo * t;
            const double b = 2.0 * pi * f_hi * t;
            out.samples[i] = amp * (cplx(std::cos(a), std::sin(a)) +
                                    cplx(std::cos(b), std::sin(b)));
        }
    }
    return out;
}

double msbw_analytic(const WaveformSpec& spec) {
    const double n = spec.n_pulses;
    const double bw = spec.bandwidth;
    const double first = pi * pi * std::pow(bw / (2.0 - 1.0 / n), 2.0);
    double sum_n2 = 0.0;
    for (std::uint32_t k = 0; k < spec.n_pulses; ++k) sum_n2 += double(k) * k;
    const double second =
        std::pow(2.0 * pi * bw, 2.0) / (n * (4.0 * n * n + 4.0 * n + 1.0)) * sum_n2;
    return first + second;
}

double msbw_numeric(const SignalBuffer& signal) {
    if (signal.samples.empty()) throw std::invalid_argument("empty signal");
    const std::size_t n = signal.samples.size();
    const auto spec = fft::fft(signal.samples);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // signed baseband frequency of bin k
        const double bin = (k <= n / 2) ? static_cast<double>(k)
                                        : static_cast<double>(k) - static_cast<double>(n);
        const double f = bin * signal.sample_rate / static_cast<double>(n);
        const double p = std::norm(spec[k]);
        num += (2.0 * pi * f) * (2.0 * pi * f) * p;
        den += p;
    }
    if (den == 0.0) throw std::invalid_argument("all-zero signal");
    return num / den;
}

WaveformSpec two_node_waveform() {
    WaveformSpec s;
    s.n_pulses = 1;
    s.f1 = 0.5e6;
    s.bandwidth = 11.0e6;
    s.delta_f_step = derive_step(s.bandwidth, s.n_pulses); // 11 MHz -> f2 = 11.5 MHz
    s.duty_cycle = 0.5;
    s.pulse_period = 0.5e-3; // T_r = 250 us
    s.sample_rate = 25.0e6;
    return s;
}

WaveformSpec three_node_waveform() {
    WaveformSpec s;
    s.n_pulses = 5;
    s.f1 = 0.5e6;
    s.delta_f_step = 1.0e6; // f2 = 5.5 MHz
    s.bandwidth = (2.0 * s.n_pulses - 1.0) * s.delta_f_step; // 9 MHz
    s.duty_cycle = 0.5;
    s.pulse_period = 200e-6; // N*T_r = 500 us
    s.sample_rate = 25.0e6;
    return s;
}

} // namespace dbeam
