#pragma once

#include "dbeam/signal.hpp"

#include <span>
#include <vector>

namespace dbeam {

/// One transmitter's contribution as seen at the evaluation point.
/// `amplitude` is the received linear magnitude (spreading already applied by
/// the caller); `position` is the distance to the receiver and supplies the
/// geometry phase -2*pi*position/lambda.
struct NodeEmission {
    double amplitude = 1.0;
    cplx channel_gain = cplx(1.0, 0.0);
    double phase_offset = 0.0; // applied correction, rad
    double position = 0.0;     // m
};

/// Beamformed power relative to a perfectly phase-aligned array.
struct GainResult {
    double coherent_gain = 0.0; // (actual/ideal)^2 in [0, 1]
    double actual_amplitude = 0.0;
    double ideal_amplitude = 0.0;
};

/// Phase correction for an estimated baseline d at steering angle theta:
/// 2*pi*(d/lambda)*cos(theta), reduced mod 2*pi.
double phase_correction(double d, double wavelength, double theta = 0.0);

/// Far-field sum at frequency f and time t:
///   sum amplitude_n * h_n * exp(j(2*pi*f*t + phase_offset_n - 2*pi*R_n/lambda))
cplx received_sum(std::span<const NodeEmission> nodes, double f, double t);

/// Ratio of beamformed power with errors to the ideal (same amplitudes,
/// error-free phases). Equals 1 iff the error phases agree mod 2*pi.
GainResult coherent_gain(std::span<const NodeEmission> nodes_with_errors,
                         std::span<const NodeEmission> nodes_ideal, double f);

} // namespace dbeam
