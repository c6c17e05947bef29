#include "dbeam/beamform.hpp"

#include "dbeam/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dbeam {

using std::numbers::pi;

double phase_correction(double d, double wavelength, double theta) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    const double phi = 2.0 * pi * (d / wavelength) * std::cos(theta);
    double r = std::fmod(phi, 2.0 * pi);
    if (r < 0.0) r += 2.0 * pi;
    return r;
}

cplx received_sum(std::span<const NodeEmission> nodes, double f, double t) {
    if (nodes.empty()) throw std::invalid_argument("empty node list");
    const double lambda = kSpeedOfLight / f;
    cplx acc(0.0, 0.0);
    for (const NodeEmission& n : nodes) {
        const double ph = 2.0 * pi * f * t + n.phase_offset -
                          2.0 * pi * n.position / lambda;
        acc += n.amplitude * n.channel_gain * cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
}

GainResult coherent_gain(std::span<const NodeEmission> nodes_with_errors,
                         std::span<const NodeEmission> nodes_ideal, double f) {
    if (nodes_with_errors.size() != nodes_ideal.size())
        throw std::invalid_argument("node count mismatch");
    for (std::size_t i = 0; i < nodes_ideal.size(); ++i)
        if (nodes_with_errors[i].amplitude != nodes_ideal[i].amplitude)
            throw std::invalid_argument("amplitude mismatch between error and ideal lists");

    GainResult g;
    g.actual_amplitude = std::abs(received_sum(nodes_with_errors, f, 0.0));
    g.ideal_amplitude = std::abs(received_sum(nodes_ideal, f, 0.0));
    double amp_scale = 0.0;
    for (const NodeEmission& n : nodes_ideal) amp_scale += std::abs(n.amplitude);
    if (g.ideal_amplitude <= 1e-12 * amp_scale)
        throw std::invalid_argument("ideal amplitude is zero");
    const double r = g.actual_amplitude / g.ideal_amplitude;
    g.coherent_gain = r * r;
    return g;
}

} // namespace dbeam
