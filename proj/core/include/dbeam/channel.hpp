#pragma once

#include "dbeam/signal.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <string>

namespace dbeam {

inline constexpr double kSpeedOfLight = 299792458.0;

/// 1-D positions (meters along the array axis) of the nodes and the receiver.
struct ArrayGeometry {
    std::map<std::string, double> positions; // node id -> coordinate
    double receiver_position = 0.0;
};

/// Link configuration for one propagation hop or a repeated round trip.
/// `snr_db` is the signal-to-noise ratio referenced to the system noise
/// bandwidth of sample_rate/2 (the usable half of the complex band); +inf
/// disables noise.
struct LinkParams {
    double carrier_frequency = 0.0; // Hz
    double snr_db = std::numeric_limits<double>::infinity();
    double repeater_gain_db = 0.0;
    std::uint64_t seed = 0;
};

/// Band-limited shift of the buffer contents by `delay` seconds (positive
/// shifts content toward later samples; zeros shift in). `pad_out` extra
/// samples are appended to the output so a delayed signal is not truncated.
SignalBuffer fractional_delay(const SignalBuffer& signal, double delay,
                              std::size_t pad_out = 0);

/// One-way propagation over `distance`: delay distance/c, amplitude 1/distance
/// (unit amplitude at 1 m), carrier phase rotation -2*pi*fc*distance/c, plus
/// AWGN at link.snr_db referenced to the propagated signal.
SignalBuffer propagate(const SignalBuffer& signal, double distance,
                       const LinkParams& link, std::size_t pad_out = 0,
                       double c = kSpeedOfLight);

/// Secondary -> primary -> secondary repeater round trip: uplink propagation,
/// repeater gain, downlink propagation. The two legs use `uplink` and
/// `downlink` carriers; each leg injects noise at snr_db + 3.01 dB so the
/// end-to-end received SNR equals the configured value.
SignalBuffer round_trip(const SignalBuffer& signal, double secondary_pos,
                        double primary_pos, const LinkParams& uplink,
                        const LinkParams& downlink, double c = kSpeedOfLight);

/// Adds complex white Gaussian noise. Per-sample variance is
/// 2 * P_active / 10^(snr_db/10): the factor 2 references the SNR to the
/// sample_rate/2 noise bandwidth. Deterministic for a fixed seed.
SignalBuffer add_awgn(const SignalBuffer& signal, double snr_db,
                      std::uint64_t seed);

} // namespace dbeam
