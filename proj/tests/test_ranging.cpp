#include "dbeam/channel.hpp"
#include "dbeam/ranging.hpp"
#include "dbeam/rng.hpp"
#include "dbeam/waveform.hpp"

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace dbeam;
using std::numbers::pi;

namespace {

const WaveformSpec kTwoNode = two_node_waveform();
const WaveformSpec kThreeNode = three_node_waveform();

SignalBuffer delayed_template(const SignalBuffer& tpl, double delay_samples,
                              std::size_t pad = 64) {
    return fractional_delay(tpl, delay_samples / tpl.sample_rate, pad);
}

} // namespace

TEST_CASE("matched_filter: integer delay peaks at lag k") {
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    for (std::size_t k : {0u, 3u, 17u}) {
        SignalBuffer rx;
        rx.sample_rate = tpl.sample_rate;
        rx.samples.assign(tpl.samples.size() + 32, cplx(0.0, 0.0));
        std::copy(tpl.samples.begin(), tpl.samples.end(), rx.samples.begin() + k);
        const CorrelationBuffer corr = matched_filter(rx, tpl);
        const double lag = corr.lag_of(static_cast<double>(corr.peak_index));
        CHECK(lag == doctest::Approx(k / tpl.sample_rate).epsilon(1e-12));
    }
}

TEST_CASE("matched_filter input validation") {
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    SignalBuffer empty;
    empty.sample_rate = tpl.sample_rate;
    CHECK_THROWS(matched_filter(empty, tpl));
    CHECK_THROWS(matched_filter(tpl, empty));
    SignalBuffer shorter = tpl;
    shorter.samples.resize(100);
    CHECK_THROWS(matched_filter(shorter, tpl));
}

namespace {

// Post-correlation SNR: peak power over the noise-only floor. The filter
// output noise is correlated across lags over the whole waveform span, so a
// single realization's lag average swings by decibels; the floor must be
// averaged over independent noise realizations instead.
double measured_post_snr_db(const SignalBuffer& tpl, double delay_samples,
                            std::size_t pad, double snr_db,
                            const std::vector<std::size_t>& floor_lags,
                            std::size_t realizations) {
    const SignalBuffer clean = fractional_delay(
        tpl, delay_samples / tpl.sample_rate, pad);
    double peak = 0.0, floor = 0.0;
    const std::size_t off = tpl.samples.size() - 1;
    for (std::size_t r = 0; r < realizations; ++r) {
        const SignalBuffer rx = add_awgn(clean, snr_db, 1000 + r);
        const CorrelationBuffer corr = matched_filter(rx, tpl);
        peak += corr.values[corr.peak_index] * corr.values[corr.peak_index];
        for (std::size_t lag : floor_lags)
            floor += corr.values[off + lag] * corr.values[off + lag];
    }
    peak /= double(realizations);
    floor /= double(realizations * floor_lags.size());
    return 10.0 * std::log10(peak / floor);
}

} // namespace

TEST_CASE("matched_filter: post-correlation SNR shows the processing gain") {
    // 30 dB input -> 65 dB post for the single-pulse waveform (gain 35 dB)
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    // floor lags beyond the +-T_r autocorrelation support, within full overlap
    const double post = measured_post_snr_db(tpl, 6.2, tpl.samples.size(), 30.0,
                                             {7000, 9500, 12000}, 120);
    CHECK(post == doctest::Approx(65.0).epsilon(1.0 / 65.0)); // +-1 dB
}

TEST_CASE("matched_filter: five-pulse waveform reaches 68 dB post SNR") {
    const SignalBuffer tpl = synthesize(kThreeNode, signature_for_node(1, 5));
    // signal support ends at lag ~22.5k; received buffer is twice the template
    const double post = measured_post_snr_db(tpl, 4.7, tpl.samples.size(), 30.0,
                                             {23000, 24000, 24900}, 120);
    CHECK(post == doctest::Approx(68.0).epsilon(1.0 / 68.0));
}

TEST_CASE("interpolate_peak: on-grid symmetric peak returns the grid lag") {
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    const SignalBuffer rx = delayed_template(tpl, 9.0);
    const CorrelationBuffer corr = matched_filter(rx, tpl);
    const double est = interpolate_peak(corr);
    const double grid_res = corr.lag_step_s * 2.0 / 1000.0;
    CHECK(std::abs(est - 9.0 / tpl.sample_rate) <= grid_res);
}

TEST_CASE("interpolate_peak: fractional delays recovered to the oracle") {
    for (const WaveformSpec& spec : {kTwoNode, kThreeNode}) {
        const SignalBuffer tpl =
            synthesize(spec, signature_for_node(1, spec.n_pulses));
        for (double d : {0.5, 0.13, 6.83}) {
            const SignalBuffer rx = delayed_template(tpl, d);
            const CorrelationBuffer corr = matched_filter(rx, tpl);
            const double est = interpolate_peak(corr);
            const double oracle = oracles::fft_upsample_peak(corr);
            const double truth = d / tpl.sample_rate;
            const double one_thousandth = corr.lag_step_s / 1000.0;
            // both the estimate and the oracle find the true delay
            CHECK(std::abs(est - truth) <= 2.0 * one_thousandth + 1e-15);
            CHECK(std::abs(oracle - truth) <= 2.0 * one_thousandth + 1e-15);
            CHECK(std::abs(est - oracle) <= 3.0 * one_thousandth);
        }
    }
}

TEST_CASE("interpolate_peak: refine_points = 1 degenerates to the raw argmax") {
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    const SignalBuffer rx = delayed_template(tpl, 5.0);
    const CorrelationBuffer corr = matched_filter(rx, tpl);
    CHECK(interpolate_peak(corr, 1) ==
          corr.lag_of(static_cast<double>(corr.peak_index)));
}

TEST_CASE("interpolate_peak: peak at the buffer edge is rejected") {
    CorrelationBuffer corr;
    corr.values = {0.1, 0.2, 5.0, 0.2, 0.1};
    corr.complex_values = {cplx(0.1, 0), cplx(0.2, 0), cplx(5.0, 0), cplx(0.2, 0),
                           cplx(0.1, 0)};
    corr.lag_step_s = 4e-8;
    corr.first_lag_s = 0.0;
    corr.peak_index = 2;
    CHECK_THROWS_AS(interpolate_peak(corr), std::invalid_argument);
}

TEST_CASE("estimate_range: noiseless round trip recovers the baseline") {
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    LinkParams up, down;
    up.carrier_frequency = 4.25e9;
    down.carrier_frequency = 5.25e9;
    const SignalBuffer rx = round_trip(tpl, 1.5, 3.0, up, down);
    const RangeEstimate est = estimate_range(rx, tpl);
    const double tol = interpolation_tolerance_m(tpl.sample_rate);
    CHECK(std::abs(est.range - 1.5) <= tol);
    CHECK(est.delay == doctest::Approx(2.0 * 1.5 / kSpeedOfLight).epsilon(1e-2));
    CHECK(est.peak_value > 0.0);
}

TEST_CASE("estimate_range: shift equivariance") {
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    const SignalBuffer rx1 = delayed_template(tpl, 3.31);
    const SignalBuffer rx2 = delayed_template(tpl, 3.31 + 5.25);
    const double d1 = estimate_range(rx1, tpl).delay;
    const double d2 = estimate_range(rx2, tpl).delay;
    const double shift_tol = 2.0 * (2.0 / 1000.0) / tpl.sample_rate;
    CHECK(std::abs((d2 - d1) - 5.25 / tpl.sample_rate) <= shift_tol);
}

TEST_CASE("estimate_range: scale invariance") {
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    SignalBuffer rx = delayed_template(tpl, 2.47);
    const double base = estimate_range(rx, tpl).delay;
    for (cplx& v : rx.samples) v *= 7.3;
    CHECK(estimate_range(rx, tpl).delay == base);
}

TEST_CASE("accuracy is monotone in SNR and never beats the bound") {
    // empirical delay variance over 500 round trips per SNR, 10..40 dB input;
    // non-increasing with SNR and at least the bound at the matching post-SNR
    const SignalBuffer tpl = synthesize(kTwoNode, signature_for_node(1, 1));
    const double msbw = msbw_analytic(kTwoNode);
    const double gain_db = 10.0 * std::log10(250e-6 * 12.5e6);
    const std::size_t trials = 500;

    Rng truth_rng(777);
    double prev_var = std::numeric_limits<double>::infinity();
    for (double snr : {10.0, 20.0, 30.0, 40.0}) {
        std::vector<double> errors;
        errors.reserve(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            const double d_samp = 8.0 + truth_rng.uniform(-1.0, 1.0);
            SignalBuffer rx = delayed_template(tpl, d_samp, 64);
            rx = add_awgn(rx, snr, derive_seed(31, std::uint64_t(snr), t));
            const double est = estimate_range(rx, tpl).delay;
            errors.push_back(est - d_samp / tpl.sample_rate);
        }
        double mean = 0.0;
        for (double e : errors) mean += e;
        mean /= errors.size();
        double var = 0.0;
        for (double e : errors) var += (e - mean) * (e - mean);
        var /= (errors.size() - 1);

        CHECK(var <= prev_var);
        // Magnitude-peak processing discards the absolute carrier phase; its
        // delay bound is 1/(2 * msbw * SNR_peak) with SNR_peak the measured
        // peak-to-noise-floor power ratio (snr + gain here). The reporting
        // convention in crlb() counts SNR 3 dB higher for the same noise
        // level, so the factor 1/2 bridges the two. Measured variances sit on
        // this bound plus the 1/1000-grid quantization.
        const double bound =
            0.5 / (msbw * std::pow(10.0, (snr + gain_db) / 10.0));
        const double mc_slack = 1.0 - 3.0 * std::sqrt(2.0 / trials);
        CHECK(var >= bound * mc_slack);
        prev_var = var;
    }
}

TEST_CASE("simultaneous signatures: separation and cross-node bias") {
    const SignalBuffer tplA = synthesize(kThreeNode, signature_for_node(1, 5));
    const SignalBuffer tplB = synthesize(kThreeNode, signature_for_node(2, 5));

    // cross-template correlation stays at least 10 dB under the auto peak
    const CorrelationBuffer auto_corr = matched_filter(tplA, tplA);
    const CorrelationBuffer cross_corr = matched_filter(tplB, tplA);
    const double sep_db = 20.0 * std::log10(auto_corr.values[auto_corr.peak_index] /
                                            cross_corr.values[cross_corr.peak_index]);
    CHECK(sep_db >= 10.0);
    // measured 13.98 dB for the ascending/descending pair; frozen as a
    // regression floor
    CHECK(sep_db >= 13.5);

    // noiseless: estimate A's delay alone and with B superimposed
    const double fs = kThreeNode.sample_rate;
    const double d1 = 1.6, d2 = 1.0; // secondary-to-primary baselines
    const double tauA = 2.0 * d1 / kSpeedOfLight * fs;
    const double tauB = (d1 + d2) / kSpeedOfLight * fs;
    SignalBuffer sigA = delayed_template(tplA, tauA);
    SignalBuffer sigB = delayed_template(tplB, tauB);
    const cplx phB = std::polar(1.4, 2.13); // interferer stronger than wanted
    for (cplx& v : sigB.samples) v *= phB;

    SignalBuffer both = sigA;
    for (std::size_t i = 0; i < both.samples.size(); ++i)
        both.samples[i] += sigB.samples[i];

    const double alone = estimate_range(sigA, tplA).range;
    const double multi =
        estimate_range_multi(both, tplA, {&tplB}).range;
    const double tol = interpolation_tolerance_m(fs);
    CHECK(std::abs(multi - alone) < tol);
}
