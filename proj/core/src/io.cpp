#include "dbeam/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dbeam::io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_signal_csv(const std::filesystem::path& path, const SignalBuffer& s) {
    std::ostringstream out;
    out << "time_s, re, im\n";
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        const double t = s.start_time + static_cast<double>(i) / s.sample_rate;
        out << fmt(t) << ", " << fmt(s.samples[i].real()) << ", "
            << fmt(s.samples[i].imag()) << "\n";
    }
    write_atomic(path, out.str());
}

void write_signal_csv_real(const std::filesystem::path& path,
                           const SignalBuffer& s) {
    std::ostringstream out;
    out << "time_s, value\n";
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        const double t = s.start_time + static_cast<double>(i) / s.sample_rate;
        out << fmt(t) << ", " << fmt(s.samples[i].real()) << "\n";
    }
    write_atomic(path, out.str());
}

SignalBuffer read_signal_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line); // header
    SignalBuffer s;
    double t0 = 0.0, t1 = 0.0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, re, im;
        if (std::sscanf(line.c_str(), "%lf , %lf , %lf", &t, &re, &im) != 3)
            throw std::runtime_error("bad csv row: " + line);
        if (row == 0) t0 = t;
        if (row == 1) t1 = t;
        s.samples.emplace_back(re, im);
        ++row;
    }
    if (row < 2) throw std::runtime_error("signal csv needs at least 2 samples");
    s.start_time = t0;
    s.sample_rate = 1.0 / (t1 - t0);
    return s;
}

void write_waveform_metadata(const std::filesystem::path& path,
                             const WaveformSpec& spec,
                             const PulseSignature& sig) {
    nlohmann::json j;
    j["n_pulses"] = spec.n_pulses;
    j["f1_hz"] = spec.f1;
    j["delta_f_step_hz"] = spec.delta_f_step;
    j["duty_cycle"] = spec.duty_cycle;
    j["pulse_period_s"] = spec.pulse_period;
    j["sample_rate_hz"] = spec.sample_rate;
    j["bandwidth_hz"] = spec.bandwidth;
    j["f2_hz"] = spec.f2();
    j["node_index"] = sig.node_index;
    j["pulse_order"] = sig.pulse_order;
    write_atomic(path, j.dump(2) + "\n");
}

WaveformSpec read_waveform_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    WaveformSpec s;
    s.n_pulses = j.at("n_pulses").get<std::uint32_t>();
    s.f1 = j.at("f1_hz").get<double>();
    s.delta_f_step = j.at("delta_f_step_hz").get<double>();
    s.duty_cycle = j.at("duty_cycle").get<double>();
    s.pulse_period = j.at("pulse_period_s").get<double>();
    s.sample_rate = j.at("sample_rate_hz").get<double>();
    s.bandwidth = j.at("bandwidth_hz").get<double>();
    return s;
}

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
} // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        cfg.sections[section].emplace_back(trim(line.substr(0, eq)),
                                           trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto it = sections.find(section);
    if (it == sections.end()) return false;
    for (const auto& [k, v] : it->second)
        if (k == key) return true;
    return false;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    const auto it = sections.find(section);
    if (it != sections.end())
        for (const auto& [k, v] : it->second)
            if (k == key) return v;
    throw std::runtime_error("config: missing [" + section + "] " + key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("config: [" + section + "] " + key +
                                 " is not a number: " + v);
    }
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int_or(const std::string& section, const std::string& key,
                        long fallback) const {
    if (!has(section, key)) return fallback;
    return static_cast<long>(get_double(section, key));
}

std::vector<std::string> Config::get_all(const std::string& section,
                                         const std::string& key) const {
    std::vector<std::string> out;
    const auto it = sections.find(section);
    if (it != sections.end())
        for (const auto& [k, v] : it->second)
            if (k == key) out.push_back(v);
    return out;
}

} // namespace dbeam::io
