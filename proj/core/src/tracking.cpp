#include "dbeam/tracking.hpp"

#include <cmath>
#include <stdexcept>

namespace dbeam {

KalmanState kalman_init(double z0, double sigma0_sq, double sigma_m_sq,
                        double sigma_c_sq) {
    if (!(sigma0_sq > 0.0) || !(sigma_m_sq > 0.0) || !(sigma_c_sq >= 0.0))
        throw std::invalid_argument("kalman variances must be positive");
    return KalmanState{z0, sigma0_sq, sigma_m_sq, sigma_c_sq, 0};
}

KalmanUpdate kalman_update(const KalmanState& state, double z,
                           double innovation_threshold) {
    KalmanUpdate u;
    const double gain = state.variance / (state.variance + state.measurement_variance);
    const double innovation = z - state.estimate;

    u.state = state;
    u.state.estimate = state.estimate + gain * innovation;
    u.state.variance = (1.0 - gain) * state.variance + state.process_variance;
    u.state.step = state.step + 1;
    u.gain = gain;
    u.innovation = innovation;
    u.diverged = std::abs(innovation) > innovation_threshold;
    return u;
}

double kalman_steady_state_variance(double sigma_m_sq, double sigma_c_sq) {
    return 0.5 * (sigma_c_sq +
                  std::sqrt(sigma_c_sq * sigma_c_sq + 4.0 * sigma_c_sq * sigma_m_sq));
}

double kalman_steady_state_gain(double sigma_m_sq, double sigma_c_sq) {
    const double s = kalman_steady_state_variance(sigma_m_sq, sigma_c_sq);
    return s / (s + sigma_m_sq);
}

} // namespace dbeam
