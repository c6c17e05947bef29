#pragma once

#include "dbeam/signal.hpp"
#include "dbeam/waveform.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace dbeam::io {

/// Formats a double with 17 significant digits (round-trip exact).
std::string fmt(double v);

/// Writes `content` to `path` atomically (temp file + rename), so an
/// interrupted run never leaves a truncated file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Signal CSV: header `time_s, re, im`, one row per sample.
void write_signal_csv(const std::filesystem::path& path, const SignalBuffer& s);
SignalBuffer read_signal_csv(const std::filesystem::path& path);

/// Real-valued export for hardware replay: header `time_s, value`, rows carry
/// the real part of the complex baseband samples.
void write_signal_csv_real(const std::filesystem::path& path,
                           const SignalBuffer& s);

/// Sidecar metadata (JSON) carrying the WaveformSpec fields.
void write_waveform_metadata(const std::filesystem::path& path,
                             const WaveformSpec& spec,
                             const PulseSignature& sig);
WaveformSpec read_waveform_metadata(const std::filesystem::path& path);

/// INI-style config: [section] headers, key = value lines, '#' comments.
/// Duplicate keys within a section accumulate in order.
struct Config {
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    long get_int_or(const std::string& section, const std::string& key,
                    long fallback) const;
    std::vector<std::string> get_all(const std::string& section,
                                     const std::string& key) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

} // namespace dbeam::io
