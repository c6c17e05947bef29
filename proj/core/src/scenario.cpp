#include "dbeam/scenario.hpp"

#include "dbeam/beamform.hpp"
#include "dbeam/ranging.hpp"
#include "dbeam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dbeam {

using std::numbers::pi;

namespace {

constexpr std::size_t kRangingPad = 64; // sample margin for delayed returns

struct NodeSet {
    std::vector<std::string> secondaries; // sorted ids
    double primary_pos = 0.0;
};

NodeSet check_geometry(const ScenarioConfig& cfg) {
    NodeSet ns;
    if (!cfg.geometry.positions.count("primary"))
        throw std::invalid_argument("geometry needs a 'primary' node");
    ns.primary_pos = cfg.geometry.positions.at("primary");
    for (const auto& [id, pos] : cfg.geometry.positions) {
        if (!std::isfinite(pos)) throw std::invalid_argument("non-finite position");
        if (id != "primary") ns.secondaries.push_back(id);
    }
    std::sort(ns.secondaries.begin(), ns.secondaries.end());
    if (ns.secondaries.empty())
        throw std::invalid_argument("geometry needs at least one secondary");
    std::vector<double> all;
    for (const auto& [id, pos] : cfg.geometry.positions) all.push_back(pos);
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i] == all[i - 1])
            throw std::invalid_argument("coincident node positions");
    return ns;
}

double wrap_2pi(double x) {
    double r = std::fmod(x, 2.0 * pi);
    if (r < 0.0) r += 2.0 * pi;
    return r;
}

/// Mean of the per-cycle peaks of the real carrier over all snapshots. The
/// emissions are static during a capture, so the sum collapses to a single
/// phasor A and r(t) = Re{A exp(j 2 pi f t)}.
double capture_amplitude(const std::vector<NodeEmission>& nodes, double f,
                         std::uint32_t snapshots, std::uint32_t cycles,
                         std::uint32_t samples_per_cycle) {
    const cplx a = received_sum(nodes, f, 0.0);
    const double mag = std::abs(a);
    const double ph0 = std::arg(a);
    double acc = 0.0;
    std::uint64_t count = 0;
    for (std::uint32_t s = 0; s < snapshots; ++s) {
        for (std::uint32_t cyc = 0; cyc < cycles; ++cyc) {
            double peak = -std::numeric_limits<double>::infinity();
            for (std::uint32_t i = 0; i < samples_per_cycle; ++i) {
                const double ph = ph0 + 2.0 * pi * static_cast<double>(i) /
                                            samples_per_cycle;
                peak = std::max(peak, mag * std::cos(ph));
            }
            acc += peak;
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

struct Emitter {
    std::string id;
    double position = 0.0;
    double tx_amplitude = 1.0;  // equalizes received amplitudes at start
    double hw_offset = 0.0;
    double cal_offset = 0.0;
    double correction = 0.0;
};

NodeEmission make_emission(const Emitter& e, double receiver_pos) {
    const double r = std::abs(e.position - receiver_pos);
    NodeEmission em;
    em.amplitude = e.tx_amplitude / r;
    em.phase_offset = e.hw_offset + e.cal_offset + e.correction;
    em.position = r;
    return em;
}

} // namespace

std::map<std::string, double> calibrate(
    const ScenarioConfig& cfg, const std::map<std::string, double>& hardware_offsets,
    const std::map<std::string, double>& corrections) {
    const NodeSet ns = check_geometry(cfg);
    std::vector<std::string> ids = ns.secondaries;
    ids.insert(ids.begin(), "primary");

    std::vector<Emitter> emitters;
    for (const auto& id : ids) {
        Emitter e;
        e.id = id;
        e.position = cfg.geometry.positions.at(id);
        e.tx_amplitude = std::abs(e.position - cfg.geometry.receiver_position);
        e.hw_offset = hardware_offsets.count(id) ? hardware_offsets.at(id) : 0.0;
        e.correction = corrections.count(id) ? corrections.at(id) : 0.0;
        emitters.push_back(e);
    }

    const double f = cfg.beamforming_frequency;
    auto combined = [&]() {
        std::vector<NodeEmission> ems;
        for (const auto& e : emitters)
            ems.push_back(make_emission(e, cfg.geometry.receiver_position));
        return std::abs(received_sum(ems, f, 0.0));
    };

    for (int pass = 0; pass < 2; ++pass) {
        for (auto& e : emitters) {
            double best_off = e.cal_offset;
            double best_amp = combined();
            for (int deg = 0; deg < 360; ++deg) {
                e.cal_offset = deg * pi / 180.0;
                const double amp = combined();
                if (amp > best_amp) {
                    best_amp = amp;
                    best_off = e.cal_offset;
                }
            }
            e.cal_offset = best_off;
        }
    }

    std::map<std::string, double> out;
    for (const auto& e : emitters) out[e.id] = e.cal_offset;
    return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const NodeSet ns = check_geometry(cfg);
    const std::size_t n_sec = ns.secondaries.size();
    validate_spec(cfg.waveform, n_sec);
    for (const auto& m : cfg.motion)
        if (!cfg.geometry.positions.count(m.node))
            throw std::invalid_argument("motion references unknown node " + m.node);

    ScenarioResult res;
    res.correction_enabled = cfg.correction_enabled;
    res.seed = cfg.seed;
    res.node_order.push_back("primary");
    for (const auto& id : ns.secondaries) res.node_order.push_back(id);

    // templates and signatures per secondary
    std::vector<SignalBuffer> templates;
    for (std::size_t k = 0; k < n_sec; ++k)
        templates.push_back(synthesize(
            cfg.waveform, signature_for_node(static_cast<std::uint32_t>(k + 1),
                                             cfg.waveform.n_pulses)));
    const double fs = cfg.waveform.sample_rate;

    // static hardware phase offsets (seeded unless overridden)
    std::map<std::string, double> hw;
    {
        Rng rng(derive_seed(cfg.seed, 0x48574f46));
        for (const auto& id : res.node_order) {
            const auto it = cfg.hardware_offsets.find(id);
            const double drawn = rng.uniform(0.0, 2.0 * pi);
            hw[id] = (it != cfg.hardware_offsets.end()) ? it->second : drawn;
        }
    }

    // mutable state
    std::map<std::string, double> positions = cfg.geometry.positions;
    std::vector<KalmanState> trackers(n_sec);
    std::vector<bool> tracker_init(n_sec, false);
    std::map<std::string, double> corrections;
    std::map<std::string, double> cal;
    std::vector<double> current_range(n_sec, 0.0);
    std::uint64_t measurement = 0;

    const double lambda_bf = cfg.c / cfg.beamforming_frequency;
    const double per_leg_snr = cfg.ranging_snr_db + 10.0 * std::log10(2.0);
    const double repeater_gain = std::pow(10.0, cfg.repeater_gain_db / 20.0);

    auto ranging_rounds = [&](std::uint32_t pos_index) {
        for (std::uint32_t round = 0; round < cfg.rounds_per_step; ++round) {
            // superpose all secondaries' waveforms at the primary
            SignalBuffer at_primary;
            at_primary.sample_rate = fs;
            at_primary.samples.assign(templates[0].samples.size() + kRangingPad,
                                      cplx(0.0, 0.0));
            LinkParams up;
            up.carrier_frequency = cfg.carrier_up_hz;
            for (std::size_t k = 0; k < n_sec; ++k) {
                const double d = std::abs(positions.at("primary") -
                                          positions.at(ns.secondaries[k]));
                SignalBuffer leg = propagate(templates[k], d, up, kRangingPad, cfg.c);
                for (std::size_t i = 0; i < at_primary.samples.size(); ++i)
                    at_primary.samples[i] += leg.samples[i];
            }
            if (std::isfinite(cfg.ranging_snr_db))
                at_primary = add_awgn(at_primary, per_leg_snr,
                                      derive_seed(cfg.seed, pos_index, round, 0xA1));
            for (cplx& v : at_primary.samples) v *= repeater_gain;

            // repeater broadcast back to every secondary
            for (std::size_t k = 0; k < n_sec; ++k) {
                const double d = std::abs(positions.at("primary") -
                                          positions.at(ns.secondaries[k]));
                LinkParams down;
                down.carrier_frequency = cfg.carrier_down_hz;
                SignalBuffer rx = propagate(at_primary, d, down, 0, cfg.c);
                if (std::isfinite(cfg.ranging_snr_db))
                    rx = add_awgn(rx, per_leg_snr,
                                  derive_seed(cfg.seed, pos_index, round, 0xB0 + k));

                RangeEstimate est;
                if (n_sec == 1) {
                    est = estimate_range(rx, templates[k], cfg.c, cfg.refine_points);
                } else {
                    std::vector<const SignalBuffer*> others;
                    for (std::size_t j = 0; j < n_sec; ++j)
                        if (j != k) others.push_back(&templates[j]);
                    est = estimate_range_multi(rx, templates[k], others, cfg.c,
                                               cfg.refine_points);
                }
                est.timestamp = measurement;
                res.ranging_log.push_back({measurement,
                                           static_cast<std::uint32_t>(k + 1),
                                           est.delay, est.range, est.peak_value});

                const double z = cfg.track_magnitude ? est.peak_value
                                                     : est.delay * fs;
                if (!tracker_init[k]) {
                    trackers[k] = kalman_init(z, cfg.sigma_m_sq, cfg.sigma_m_sq,
                                              cfg.sigma_c_sq);
                    tracker_init[k] = true;
                    res.kalman_log.push_back({measurement,
                                              static_cast<std::uint32_t>(k + 1), z,
                                              trackers[k].estimate,
                                              trackers[k].variance, 0.0, false});
                } else {
                    const KalmanUpdate u =
                        kalman_update(trackers[k], z, cfg.innovation_threshold);
                    trackers[k] = u.state;
                    res.kalman_log.push_back({measurement,
                                              static_cast<std::uint32_t>(k + 1), z,
                                              u.state.estimate, u.state.variance,
                                              u.gain, u.diverged});
                }
                // the phase correction is driven by the filtered delay
                const double filtered_delay_s =
                    cfg.track_magnitude ? est.delay : trackers[k].estimate / fs;
                current_range[k] = cfg.c * filtered_delay_s / 2.0;
                ++measurement;
            }
        }
        for (std::size_t k = 0; k < n_sec; ++k)
            corrections[ns.secondaries[k]] =
                -phase_correction(current_range[k], lambda_bf, 0.0);
    };

    std::uint32_t total_steps = 0;
    for (const auto& m : cfg.motion)
        total_steps = std::max(total_steps, m.n_steps);

    double min_ratio = std::numeric_limits<double>::infinity();
    double sum_ratio = 0.0;

    for (std::uint32_t p = 0; p <= total_steps; ++p) {
        if (p > 0) {
            for (const auto& m : cfg.motion)
                if (p <= m.n_steps) positions.at(m.node) += m.direction * m.step_m;
        }

        if (cfg.correction_enabled) ranging_rounds(p);

        if (p == 0) {
            ScenarioConfig cal_cfg = cfg;
            cal_cfg.geometry.positions = positions;
            cal = calibrate(cal_cfg, hw, corrections);
        }

        // receiver capture: solo amplitudes, then the combined sum
        std::vector<Emitter> emitters;
        for (const auto& id : res.node_order) {
            Emitter e;
            e.id = id;
            e.position = positions.at(id);
            e.tx_amplitude =
                std::abs(cfg.geometry.positions.at(id) - cfg.geometry.receiver_position);
            e.hw_offset = hw.at(id);
            e.cal_offset = cal.at(id);
            e.correction = corrections.count(id) ? corrections.at(id) : 0.0;
            emitters.push_back(e);
        }

        PositionRecord rec;
        rec.index = p;
        rec.moved_position_m =
            cfg.motion.empty() ? positions.at("primary") : positions.at(cfg.motion[0].node);
        std::vector<NodeEmission> all;
        for (const auto& e : emitters) {
            std::vector<NodeEmission> solo{
                make_emission(e, cfg.geometry.receiver_position)};
            rec.solo_amplitudes.push_back(capture_amplitude(
                solo, cfg.beamforming_frequency, cfg.snapshots_per_position,
                cfg.cycles_per_snapshot, cfg.samples_per_cycle));
            all.push_back(solo[0]);
        }
        rec.combined_amplitude = capture_amplitude(
            all, cfg.beamforming_frequency, cfg.snapshots_per_position,
            cfg.cycles_per_snapshot, cfg.samples_per_cycle);
        rec.ideal_sum = 0.0;
        for (double a : rec.solo_amplitudes) rec.ideal_sum += a;
        if (cfg.correction_enabled) rec.corrected_range_m = current_range;

        const double ratio = rec.combined_amplitude / rec.ideal_sum;
        min_ratio = std::min(min_ratio, ratio);
        sum_ratio += ratio;
        res.positions.push_back(std::move(rec));
    }

    res.calibration_offsets = cal;
    res.min_combined_over_ideal = min_ratio;
    res.mean_combined_over_ideal = sum_ratio / static_cast<double>(res.positions.size());
    return res;
}

ScenarioConfig two_node_scenario() {
    ScenarioConfig cfg;
    cfg.geometry.receiver_position = 0.0;
    cfg.geometry.positions["secondary1"] = 1.5;
    cfg.geometry.positions["primary"] = 3.0;
    cfg.waveform = two_node_waveform();
    cfg.motion.push_back({"primary", 0.02, 10, -1});
    return cfg;
}

ScenarioConfig three_node_scenario() {
    ScenarioConfig cfg;
    cfg.geometry.receiver_position = 0.0;
    cfg.geometry.positions["secondary1"] = 1.0;
    cfg.geometry.positions["secondary2"] = 1.6;
    cfg.geometry.positions["primary"] = 2.6;
    cfg.waveform = three_node_waveform();
    cfg.motion.push_back({"primary", 0.02, 10, -1});
    return cfg;
}

} // namespace dbeam
