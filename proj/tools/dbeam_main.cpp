// dbeam - desk-scale simulator for open-loop distributed beamforming with
// two-tone stepped-frequency ranging.
//
// Subcommands: waveform, crlb, montecarlo, scenario, selftest.
// Exit codes: 0 ok, 1 usage error, 2 config/IO error, 3 selftest failure.

#include "dbeam/analysis.hpp"
#include "dbeam/beamform.hpp"
#include "dbeam/channel.hpp"
#include "dbeam/io.hpp"
#include "dbeam/presets.hpp"
#include "dbeam/ranging.hpp"
#include "dbeam/scenario.hpp"
#include "dbeam/tracking.hpp"
#include "dbeam/waveform.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace dbeam;

namespace {

constexpr double kRoundedC = 3.0e8;

WaveformSpec waveform_preset(const std::string& name) {
    if (name == "two-node") return two_node_waveform();
    if (name == "three-node") return three_node_waveform();
    throw std::runtime_error("unknown preset '" + name + "' (two-node|three-node)");
}

std::string crlb_report_text(const CrlbPreset& p) {
    std::ostringstream out;
    out << "preset: " << p.name << "\n";
    out << "snr_db: " << io::fmt(p.primary.snr_db) << "\n";
    out << "processing_gain_db: " << io::fmt(p.primary.processing_gain_db) << "\n";
    out << "post_snr_db: " << io::fmt(p.primary.post_snr_db) << "\n";
    out << "bandwidth_hz: " << io::fmt(p.bandwidth_primary_hz) << "\n";
    out << "msbw_rad2_s2: " << io::fmt(p.primary.msbw) << "\n";
    out << "delay_variance_s2: " << io::fmt(p.primary.delay_variance) << "\n";
    out << "range_std_m: " << io::fmt(p.primary.range_std) << "\n";
    out << "max_frequency_hz: " << io::fmt(p.primary.max_frequency) << "\n";
    out << "# alternate msbw reading (implied bandwidth "
        << io::fmt(p.bandwidth_alternate_hz) << " Hz):\n";
    out << "alternate_msbw_rad2_s2: " << io::fmt(p.alternate.msbw) << "\n";
    out << "alternate_delay_variance_s2: " << io::fmt(p.alternate.delay_variance) << "\n";
    out << "alternate_range_std_m: " << io::fmt(p.alternate.range_std) << "\n";
    out << "alternate_max_frequency_hz: " << io::fmt(p.alternate.max_frequency) << "\n";
    return out.str();
}

std::string gain_curve_csv(const GainCurve& c) {
    std::ostringstream out;
    out << "sigma_d_over_lambda, probability\n";
    for (std::size_t i = 0; i < c.sigma_d_over_lambda.size(); ++i)
        out << io::fmt(c.sigma_d_over_lambda[i]) << ", "
            << io::fmt(c.probability[i]) << "\n";
    return out.str();
}

std::string scenario_result_csv(const ScenarioResult& r) {
    std::ostringstream out;
    out << "position_m";
    for (std::size_t i = 1; i <= r.node_order.size(); ++i)
        out << ", solo_amp_node" << i;
    out << ", combined_amp, corrected_flag\n";
    for (const auto& rec : r.positions) {
        out << io::fmt(rec.moved_position_m);
        for (double a : rec.solo_amplitudes) out << ", " << io::fmt(a);
        out << ", " << io::fmt(rec.combined_amplitude) << ", "
            << (r.correction_enabled ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string ranging_log_csv(const ScenarioResult& r) {
    std::ostringstream out;
    out << "step, node_id, delay_s, range_m, peak_value\n";
    for (const auto& row : r.ranging_log)
        out << row.step << ", " << row.node << ", " << io::fmt(row.delay_s)
            << ", " << io::fmt(row.range_m) << ", " << io::fmt(row.peak_value)
            << "\n";
    return out.str();
}

std::string kalman_log_csv(const ScenarioResult& r, std::uint32_t node) {
    std::ostringstream out;
    out << "step, z, estimate, variance, gain, diverged_flag\n";
    for (const auto& row : r.kalman_log)
        if (row.node == node)
            out << row.step << ", " << io::fmt(row.z) << ", "
                << io::fmt(row.estimate) << ", " << io::fmt(row.variance) << ", "
                << io::fmt(row.gain) << ", " << (row.diverged ? 1 : 0) << "\n";
    return out.str();
}

ScenarioConfig scenario_from_config(const io::Config& cfg) {
    ScenarioConfig sc;
    const auto geo = cfg.sections.find("geometry");
    if (geo == cfg.sections.end())
        throw std::runtime_error("config: missing [geometry]");
    for (const auto& [key, val] : geo->second) {
        if (key == "receiver")
            sc.geometry.receiver_position = cfg.get_double("geometry", "receiver");
        else
            sc.geometry.positions[key] = std::stod(val);
    }

    const std::string preset = cfg.get_or("waveform", "preset", "");
    if (!preset.empty()) {
        sc.waveform = waveform_preset(preset);
    } else {
        sc.waveform.n_pulses =
            static_cast<std::uint32_t>(cfg.get_int_or("waveform", "n_pulses", 1));
        sc.waveform.f1 = cfg.get_double("waveform", "f1_hz");
        sc.waveform.delta_f_step = cfg.get_double("waveform", "delta_f_step_hz");
        sc.waveform.duty_cycle = cfg.get_double_or("waveform", "duty_cycle", 0.5);
        sc.waveform.pulse_period = cfg.get_double("waveform", "pulse_period_s");
        sc.waveform.sample_rate = cfg.get_double_or("waveform", "sample_rate_hz", 25e6);
        sc.waveform.bandwidth = cfg.get_double_or(
            "waveform", "bandwidth_hz",
            (2.0 * sc.waveform.n_pulses - 1.0) * sc.waveform.delta_f_step);
    }

    sc.ranging_snr_db = cfg.get_double_or("ranging", "snr_db", 30.0);
    sc.carrier_up_hz = cfg.get_double_or("ranging", "carrier_up_hz", 4.25e9);
    sc.carrier_down_hz = cfg.get_double_or("ranging", "carrier_down_hz", 5.25e9);
    sc.repeater_gain_db = cfg.get_double_or("ranging", "repeater_gain_db", 0.0);
    sc.rounds_per_step = static_cast<std::uint32_t>(
        cfg.get_int_or("ranging", "rounds_per_step", 25));

    sc.beamforming_frequency =
        cfg.get_double_or("beamforming", "frequency_hz", 1.5e9);

    for (const std::string& mv : cfg.get_all("motion", "move")) {
        std::istringstream in(mv);
        ScenarioConfig::Motion m;
        if (!(in >> m.node >> m.step_m >> m.n_steps >> m.direction))
            throw std::runtime_error("config: bad motion line: " + mv);
        sc.motion.push_back(m);
    }

    sc.snapshots_per_position = static_cast<std::uint32_t>(
        cfg.get_int_or("capture", "snapshots_per_position", 100));
    sc.cycles_per_snapshot = static_cast<std::uint32_t>(
        cfg.get_int_or("capture", "cycles_per_snapshot", 15));
    sc.samples_per_cycle = static_cast<std::uint32_t>(
        cfg.get_int_or("capture", "samples_per_cycle", 256));

    const std::string corr = cfg.get_or("run", "correction", "on");
    sc.correction_enabled = (corr == "on" || corr == "true" || corr == "1");
    sc.seed = static_cast<std::uint64_t>(cfg.get_int_or("run", "seed", 1));
    sc.c = cfg.get_double_or("run", "speed_of_light", kSpeedOfLight);
    sc.refine_points = static_cast<std::uint32_t>(
        cfg.get_int_or("run", "refine_points", 1000));

    sc.sigma_m_sq = cfg.get_double_or("kalman", "sigma_m_sq", kDefaultMeasurementVariance);
    sc.sigma_c_sq = cfg.get_double_or("kalman", "sigma_c_sq", kDefaultProcessVariance);
    sc.innovation_threshold =
        cfg.get_double_or("kalman", "innovation_threshold", 3.0);
    return sc;
}

void write_scenario_outputs(const ScenarioResult& res, const fs::path& dir) {
    io::write_atomic(dir / "scenario_result.csv", scenario_result_csv(res));
    io::write_atomic(dir / "ranging_log.csv", ranging_log_csv(res));
    for (std::size_t k = 1; k < res.node_order.size(); ++k)
        io::write_atomic(dir / ("kalman_node" + std::to_string(k) + ".csv"),
                         kalman_log_csv(res, static_cast<std::uint32_t>(k)));
}

int run_selftest() {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
        if (!detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };
    auto within = [](double v, double target, double rel) {
        return std::abs(v - target) <= rel * std::abs(target);
    };

    const CrlbPreset two = crlb_two_node_preset();
    check("crlb two-node delay variance 2.65e-22 s^2",
          within(two.primary.delay_variance, 2.65e-22, 0.02),
          io::fmt(two.primary.delay_variance));
    check("crlb two-node range std 2.44 mm",
          within(two.primary.range_std, 2.44e-3, 0.02), io::fmt(two.primary.range_std));
    check("crlb two-node max frequency 6.14 GHz",
          within(two.primary.max_frequency, 6.14e9, 0.02),
          io::fmt(two.primary.max_frequency));

    const CrlbPreset three = crlb_three_node_preset();
    check("crlb three-node range std 2.42 mm",
          within(three.primary.range_std, 2.42e-3, 0.02),
          io::fmt(three.primary.range_std));
    check("crlb three-node max frequency 6.18 GHz",
          within(three.primary.max_frequency, 6.18e9, 0.02),
          io::fmt(three.primary.max_frequency));

    const double pg2 = processing_gain_db(1, 250e-6, 12.5e6);
    const double pg3 = processing_gain_db(5, 100e-6, 12.5e6);
    check("processing gain 35 dB (single pulse, 250 us)",
          std::abs(pg2 - 35.0) <= 0.1, io::fmt(pg2));
    check("processing gain 38 dB (five pulses, 100 us)",
          std::abs(pg3 - 38.0) <= 0.1, io::fmt(pg3));

    KalmanState ks = kalman_init(0.0, kDefaultMeasurementVariance);
    for (int i = 0; i < 200; ++i) ks = kalman_update(ks, 0.0).state;
    const double gain_inf =
        ks.variance / (ks.variance + ks.measurement_variance);
    check("kalman steady-state variance 1.5e-5",
          std::abs(ks.variance - 1.5e-5) <= 1e-9, io::fmt(ks.variance));
    check("kalman steady-state gain 1/3",
          std::abs(gain_inf - 1.0 / 3.0) <= 1e-9, io::fmt(gain_inf));

    WaveformSpec w5 = three_node_waveform();
    w5.bandwidth = 11e6;
    check("msbw closed form (N=5, BW=11 MHz) = 6.0547e14",
          within(msbw_analytic(w5), 6.0547e14, 1e-4), io::fmt(msbw_analytic(w5)));
    check("derive_step(9 MHz, 5) = 1 MHz",
          within(derive_step(9e6, 5), 1e6, 1e-12), io::fmt(derive_step(9e6, 5)));

    const WaveformSpec w = three_node_waveform();
    const SignalBuffer a = synthesize(w, signature_for_node(1, 5));
    const SignalBuffer b = synthesize(w, signature_for_node(2, 5));
    const CorrelationBuffer auto_corr = matched_filter(a, a);
    const CorrelationBuffer cross_corr = matched_filter(b, a);
    const double sep_db = 20.0 * std::log10(auto_corr.values[auto_corr.peak_index] /
                                            cross_corr.values[cross_corr.peak_index]);
    check("signature cross-correlation suppressed >= 10 dB", sep_db >= 10.0,
          io::fmt(sep_db) + " dB");

    std::cout << (failures == 0 ? "selftest: all checks passed\n"
                                : "selftest: FAILURES\n");
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dbeam: distributed-beamforming ranging and coherent-gain simulator"};
    app.require_subcommand(1);

    std::string output_dir = ".";
    bool paper_c = false;
    app.add_flag("--paper-c", paper_c,
                 "use c = 3e8 m/s instead of 299792458 m/s");

    // waveform
    auto* wf = app.add_subcommand("waveform", "synthesize a waveform and export CSV + metadata");
    std::string wf_preset = "two-node";
    std::uint32_t wf_node = 1;
    bool wf_real = false;
    wf->add_option("--preset", wf_preset, "two-node|three-node")->capture_default_str();
    wf->add_option("--node", wf_node, "node index for the pulse signature (1-based)")
        ->capture_default_str();
    wf->add_flag("--real", wf_real, "also export the real part (time_s, value)");
    wf->add_option("--output-dir", output_dir, "output directory")->capture_default_str();

    // crlb
    auto* cr = app.add_subcommand("crlb", "print the delay/range bound report for a preset");
    std::string cr_preset = "two-node";
    cr->add_option("--preset", cr_preset, "two-node|three-node")->capture_default_str();

    // montecarlo
    auto* mc = app.add_subcommand("montecarlo", "P(Gc >= threshold) vs sigma_d sweep");
    std::uint32_t mc_nodes = 3;
    std::uint32_t mc_trials = 10000;
    double mc_threshold = 0.9;
    std::uint64_t mc_seed = 1;
    std::uint32_t mc_grid = 50;
    mc->add_option("--nodes", mc_nodes, "array size")->capture_default_str();
    mc->add_option("--trials", mc_trials, "Monte-Carlo trials per grid point")
        ->capture_default_str();
    mc->add_option("--threshold", mc_threshold, "coherent-gain threshold")
        ->capture_default_str();
    mc->add_option("--seed", mc_seed, "master seed")->capture_default_str();
    mc->add_option("--grid-points", mc_grid, "sigma grid size")->capture_default_str();
    mc->add_option("--output-dir", output_dir, "output directory")->capture_default_str();

    // scenario
    auto* sn = app.add_subcommand("scenario", "run a moving-array experiment");
    std::string sn_config;
    std::string sn_preset;
    bool sn_no_correction = false;
    std::int64_t sn_seed = -1;
    sn->add_option("config", sn_config, "scenario config file");
    sn->add_option("--preset", sn_preset, "two-node|three-node (instead of a config file)");
    sn->add_flag("--no-correction", sn_no_correction,
                 "disable range-based phase correction");
    sn->add_option("--seed", sn_seed, "override the config seed");
    sn->add_option("--output-dir", output_dir, "output directory")->capture_default_str();

    // selftest
    app.add_subcommand("selftest", "run the built-in quantitative checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors exit 1, --help exits 0
    }
    const double c = paper_c ? kRoundedC : kSpeedOfLight;

    try {
        if (wf->parsed()) {
            const WaveformSpec spec = waveform_preset(wf_preset);
            const PulseSignature sig = signature_for_node(wf_node, spec.n_pulses);
            validate_spec(spec, wf_node);
            const SignalBuffer s = synthesize(spec, sig);
            const fs::path dir(output_dir);
            io::write_signal_csv(dir / "waveform.csv", s);
            io::write_waveform_metadata(dir / "waveform_meta.json", spec, sig);
            if (wf_real) io::write_signal_csv_real(dir / "waveform_real.csv", s);
            std::cout << "wrote " << (dir / "waveform.csv").string() << " ("
                      << s.samples.size() << " samples)\n";
            std::cout << "msbw_analytic_rad2_s2: " << io::fmt(msbw_analytic(spec))
                      << "\n";
            return 0;
        }
        if (cr->parsed()) {
            const CrlbPreset p = (cr_preset == "two-node")
                                     ? crlb_two_node_preset(c)
                                     : (cr_preset == "three-node")
                                           ? crlb_three_node_preset(c)
                                           : throw std::runtime_error(
                                                 "unknown preset '" + cr_preset + "'");
            std::cout << crlb_report_text(p);
            return 0;
        }
        if (mc->parsed()) {
            const GainCurve curve = gain_probability_sweep(
                mc_nodes, default_sigma_grid(mc_grid), mc_threshold, mc_trials,
                mc_seed);
            const fs::path out = fs::path(output_dir) /
                                 ("gain_curve_" + std::to_string(mc_nodes) + "nodes.csv");
            io::write_atomic(out, gain_curve_csv(curve));
            std::cout << "wrote " << out.string() << "\n";
            return 0;
        }
        if (sn->parsed()) {
            ScenarioConfig cfg;
            if (!sn_preset.empty()) {
                cfg = (sn_preset == "two-node") ? two_node_scenario()
                      : (sn_preset == "three-node")
                          ? three_node_scenario()
                          : throw std::runtime_error("unknown preset '" + sn_preset + "'");
            } else if (!sn_config.empty()) {
                cfg = scenario_from_config(io::load_config(sn_config));
            } else {
                std::cerr << "scenario: need a config file or --preset\n";
                return 1;
            }
            if (sn_no_correction) cfg.correction_enabled = false;
            if (sn_seed >= 0) cfg.seed = static_cast<std::uint64_t>(sn_seed);
            if (paper_c) cfg.c = kRoundedC;
            const ScenarioResult res = run_scenario(cfg);
            write_scenario_outputs(res, output_dir);
            std::cout << "positions: " << res.positions.size()
                      << "  min combined/ideal: " << io::fmt(res.min_combined_over_ideal)
                      << "  mean: " << io::fmt(res.mean_combined_over_ideal) << "\n";
            std::cout << "wrote scenario_result.csv, ranging_log.csv, kalman_node*.csv in "
                      << output_dir << "\n";
            return 0;
        }
        return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
