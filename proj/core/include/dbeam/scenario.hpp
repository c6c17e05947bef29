#pragma once

#include "dbeam/channel.hpp"
#include "dbeam/tracking.hpp"
#include "dbeam/waveform.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dbeam {

/// End-to-end moving-array experiment: stationary secondaries range to a
/// moving primary through its repeater, refine with a Kalman tracker, and
/// phase-correct their beamforming carriers; a receiver capture records
/// combined and per-node solo amplitudes at every position.
struct ScenarioConfig {
    ArrayGeometry geometry; // ids: "primary", "secondary1", "secondary2", ...
    double beamforming_frequency = 1.5e9;

    WaveformSpec waveform; // ranging waveform; signatures assigned per secondary

    double ranging_snr_db = 30.0;  // end-to-end received SNR at each secondary
    double carrier_up_hz = 4.25e9;
    double carrier_down_hz = 5.25e9;
    double repeater_gain_db = 0.0;
    std::uint32_t rounds_per_step = 25; // ranging rounds per position

    struct Motion {
        std::string node;
        double step_m = 0.0;
        std::uint32_t n_steps = 0;
        int direction = -1; // sign of the coordinate change
    };
    std::vector<Motion> motion;

    std::uint32_t snapshots_per_position = 100;
    std::uint32_t cycles_per_snapshot = 15;
    std::uint32_t samples_per_cycle = 256;

    bool correction_enabled = true;
    std::uint64_t seed = 1;
    double c = kSpeedOfLight;
    std::uint32_t refine_points = 1000;

    // tracker configuration (tracked value: peak delay in correlation samples)
    double sigma_m_sq = kDefaultMeasurementVariance;
    double sigma_c_sq = kDefaultProcessVariance;
    double innovation_threshold = 3.0; // correlation samples
    bool track_magnitude = false;      // fidelity mode: filter the peak value instead

    // per-node static phase offsets; empty entries are drawn from the seed
    std::map<std::string, double> hardware_offsets;
};

struct RangingLogRow {
    std::uint64_t step = 0; // global measurement counter
    std::uint32_t node = 0; // secondary index, 1-based
    double delay_s = 0.0;   // raw measured two-way delay
    double range_m = 0.0;   // raw c*delay/2
    double peak_value = 0.0;
};

struct KalmanLogRow {
    std::uint64_t step = 0;
    std::uint32_t node = 0;
    double z = 0.0;
    double estimate = 0.0;
    double variance = 0.0;
    double gain = 0.0;
    bool diverged = false;
};

struct PositionRecord {
    std::uint32_t index = 0;
    double moved_position_m = 0.0;        // coordinate of the moved node
    std::vector<double> solo_amplitudes;  // node_order
    double combined_amplitude = 0.0;
    double ideal_sum = 0.0;               // sum of solo amplitudes
    std::vector<double> corrected_range_m; // per secondary, empty when uncorrected
};

struct ScenarioResult {
    std::vector<std::string> node_order; // "primary" first, then secondaries
    std::vector<PositionRecord> positions;
    std::vector<RangingLogRow> ranging_log;
    std::vector<KalmanLogRow> kalman_log;
    std::map<std::string, double> calibration_offsets;
    double min_combined_over_ideal = 0.0;
    double mean_combined_over_ideal = 0.0;
    bool correction_enabled = true;
    std::uint64_t seed = 0;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Static per-node phase offsets maximizing the combined amplitude at the
/// current geometry: sequential 1-degree grid search per node, two passes.
std::map<std::string, double> calibrate(const ScenarioConfig& config,
                                        const std::map<std::string, double>& hardware_offsets,
                                        const std::map<std::string, double>& corrections);

/// Reference experiment configurations (see docs for the layouts).
ScenarioConfig two_node_scenario();
ScenarioConfig three_node_scenario();

} // namespace dbeam
