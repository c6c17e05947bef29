#pragma once

#include <cstdint>

namespace dbeam {

/// State of the scalar Kalman filter refining correlation-peak measurements.
/// The filter models the tracked value as a constant with a small random
/// perturbation per step (process variance sigma_c^2).
struct KalmanState {
    double estimate = 0.0;
    double variance = 0.0;             // sigma_n^2
    double measurement_variance = 0.0; // sigma_M^2
    double process_variance = 0.0;     // sigma_c^2
    std::uint64_t step = 0;
};

/// One update's observables, for logging.
struct KalmanUpdate {
    KalmanState state;
    double gain = 0.0;
    double innovation = 0.0;
    bool diverged = false; // innovation gate tripped (update still applied)
};

// defaults measured in the reference system (units of the tracked value)
inline constexpr double kDefaultMeasurementVariance = 3.0e-5;
inline constexpr double kDefaultProcessVariance = 5.0e-6;

KalmanState kalman_init(double z0, double sigma0_sq,
                        double sigma_m_sq = kDefaultMeasurementVariance,
                        double sigma_c_sq = kDefaultProcessVariance);

/// One filter step, in the fixed order gain -> estimate -> variance:
///   K = s/(s + sigma_M^2);  x <- x + K (z - x);  s <- (1-K) s + sigma_c^2
/// If |z - x| exceeds innovation_threshold the update is flagged as a
/// possible divergence (e.g. motion larger than the filter can track); the
/// caller decides what to do with the flag.
KalmanUpdate kalman_update(const KalmanState& state, double z,
                           double innovation_threshold = 3.0);

/// Fixed point of the variance recursion: the positive root of
///   s^2 - sigma_c^2 * s - sigma_c^2 * sigma_M^2 = 0
double kalman_steady_state_variance(double sigma_m_sq, double sigma_c_sq);
double kalman_steady_state_gain(double sigma_m_sq, double sigma_c_sq);

} // namespace dbeam
