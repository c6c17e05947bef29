#include "dbeam/channel.hpp"

#include "dbeam/fft.hpp"
#include "dbeam/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dbeam {

using std::numbers::pi;

SignalBuffer fractional_delay(const SignalBuffer& signal, double delay,
                              std::size_t pad_out) {
    const std::size_t n = signal.samples.size();
    if (n == 0) throw std::invalid_argument("empty signal");
    if (std::abs(delay) >= signal.duration())
        throw std::invalid_argument("delay exceeds buffer duration");

    const double d_samp = delay * signal.sample_rate;
    const std::size_t n_out = n + pad_out;

    SignalBuffer out;
    out.sample_rate = signal.sample_rate;
    out.start_time = signal.start_time;

    // exact integer shifts bypass the interpolator and stay bit-identical
    const double rounded = std::round(d_samp);
    if (std::abs(d_samp - rounded) < 1e-12) {
        const auto k = static_cast<long>(rounded);
        out.samples.assign(n_out, cplx(0.0, 0.0));
        for (long i = 0; i < static_cast<long>(n_out); ++i) {
            const long j = i - k;
            if (j >= 0 && j < static_cast<long>(n)) out.samples[i] = signal.samples[j];
        }
        return out;
    }

    const std::size_t margin = static_cast<std::size_t>(std::ceil(std::abs(d_samp))) + 8;
    const std::size_t m = fft::next_pow2(n_out + margin);
    std::vector<cplx> work(m, cplx(0.0, 0.0));
    std::copy(signal.samples.begin(), signal.samples.end(), work.begin());
    auto spec = fft::fft(work);
    for (std::size_t k = 0; k < m; ++k) {
        const double bin = (k <= m / 2) ? static_cast<double>(k)
                                        : static_cast<double>(k) - static_cast<double>(m);
        const double ph = -2.0 * pi * bin * d_samp / static_cast<double>(m);
        spec[k] *= cplx(std::cos(ph), std::sin(ph));
    }
    auto shifted = fft::ifft(spec);
    out.samples.assign(shifted.begin(), shifted.begin() + n_out);
    return out;
}

SignalBuffer propagate(const SignalBuffer& signal, double distance,
                       const LinkParams& link, std::size_t pad_out, double c) {
    if (!(distance > 0.0)) throw std::invalid_argument("distance must be positive");
    if (!(link.carrier_frequency > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");

    const double delay = distance / c;
    SignalBuffer out = fractional_delay(signal, delay, pad_out);

    const double amp = 1.0 / distance; // unit amplitude at 1 m
    const double ph = -2.0 * pi * link.carrier_frequency * distance / c;
    const cplx scale = amp * cplx(std::cos(ph), std::sin(ph));
    for (cplx& v : out.samples) v *= scale;

    if (std::isfinite(link.snr_db)) out = add_awgn(out, link.snr_db, link.seed);
    return out;
}

SignalBuffer round_trip(const SignalBuffer& signal, double secondary_pos,
                        double primary_pos, const LinkParams& uplink,
                        const LinkParams& downlink, double c) {
    const double d = std::abs(primary_pos - secondary_pos);
    if (!(d > 0.0)) throw std::invalid_argument("coincident node positions");

    const double per_leg_snr_offset = 10.0 * std::log10(2.0);
    const std::size_t pad = static_cast<std::size_t>(
                                std::ceil(2.0 * d / c * signal.sample_rate)) + 8;

    LinkParams up = uplink;
    up.snr_db = uplink.snr_db + per_leg_snr_offset;
    SignalBuffer at_primary = propagate(signal, d, up, pad);

    const double g = std::pow(10.0, uplink.repeater_gain_db / 20.0);
    for (cplx& v : at_primary.samples) v *= g;

    LinkParams down = downlink;
    down.snr_db = downlink.snr_db + per_leg_snr_offset;
    down.seed = downlink.seed + 1;
    return propagate(at_primary, d, down, 0);
}

SignalBuffer add_awgn(const SignalBuffer& signal, double snr_db,
                      std::uint64_t seed) {
    if (!std::isfinite(snr_db)) return signal;
    const double p = active_power(signal); // throws on all-zero signal
    const double noise_var = 2.0 * p / std::pow(10.0, snr_db / 10.0);
    const double s = std::sqrt(noise_var / 2.0); // per real component

    SignalBuffer out = signal;
    Rng rng(seed);
    for (cplx& v : out.samples) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        v += cplx(s * re, s * im);
    }
    return out;
}

} // namespace dbeam
