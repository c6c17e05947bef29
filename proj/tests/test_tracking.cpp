#include "dbeam/rng.hpp"
#include "dbeam/tracking.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace dbeam;

TEST_CASE("kalman_init defaults and validation") {
    const KalmanState s = kalman_init(1.25, 3e-5);
    CHECK(s.estimate == 1.25);
    CHECK(s.variance == 3e-5);
    CHECK(s.measurement_variance == kDefaultMeasurementVariance);
    CHECK(s.process_variance == kDefaultProcessVariance);
    CHECK(s.step == 0);
    CHECK_THROWS_AS(kalman_init(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(kalman_init(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("first update with sigma0 = sigmaM has gain 1/2") {
    const KalmanState s = kalman_init(0.0, kDefaultMeasurementVariance);
    const KalmanUpdate u = kalman_update(s, 1.0);
    CHECK(u.gain == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.state.estimate == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("constant measurements: monotone convergence to z") {
    KalmanState s = kalman_init(0.0, 1e-3);
    const double z = 2.0;
    double prev_err = std::abs(z - s.estimate);
    for (int i = 0; i < 50; ++i) {
        s = kalman_update(s, z).state;
        const double err = std::abs(z - s.estimate);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-8);
}

TEST_CASE("steady state: variance 1.5e-5 and gain 1/3") {
    CHECK(kalman_steady_state_variance(3e-5, 5e-6) ==
          doctest::Approx(1.5e-5).epsilon(1e-12));
    CHECK(kalman_steady_state_gain(3e-5, 5e-6) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // the recursion reaches the fixed point from any positive start
    for (double s0 : {1e-9, 3e-5, 1.0}) {
        KalmanState s = kalman_init(0.0, s0);
        double last_gain = 0.0;
        for (int i = 0; i < 200; ++i) {
            const KalmanUpdate u = kalman_update(s, 0.0);
            s = u.state;
            last_gain = u.gain;
        }
        CHECK(std::abs(s.variance - 1.5e-5) < 1e-12);
        (void)last_gain;
        const double gain_inf = s.variance / (s.variance + s.measurement_variance);
        CHECK(std::abs(gain_inf - 1.0 / 3.0) < 1e-9);
    }
}

TEST_CASE("no process noise: variance and gain decay to zero") {
    KalmanState s = kalman_init(0.0, 1e-3, 3e-5, 0.0);
    double gain = 1.0;
    for (int i = 0; i < 5000; ++i) {
        const KalmanUpdate u = kalman_update(s, 1.0);
        s = u.state;
        gain = u.gain;
    }
    CHECK(s.variance < 1e-7);
    CHECK(gain < 1e-2);
}

TEST_CASE("gain bounds and convex-combination property") {
    Rng rng(2024);
    KalmanState s = kalman_init(rng.gaussian(), 1e-4);
    for (int i = 0; i < 500; ++i) {
        const double z = rng.gaussian(0.0, 3.0);
        const double prev = s.estimate;
        const KalmanUpdate u = kalman_update(s, z);
        CHECK(u.gain > 0.0);
        CHECK(u.gain < 1.0);
        const double lo = std::min(prev, z), hi = std::max(prev, z);
        CHECK(u.state.estimate >= lo);
        CHECK(u.state.estimate <= hi);
        CHECK(u.state.variance > 0.0);
        s = u.state;
    }
}

TEST_CASE("innovation gate flags large jumps without blocking them") {
    KalmanState s = kalman_init(0.0, 3e-5);
    const KalmanUpdate small = kalman_update(s, 0.5, 3.0);
    CHECK_FALSE(small.diverged);
    const KalmanUpdate big = kalman_update(s, 4.2, 3.0);
    CHECK(big.diverged);
    CHECK(big.state.estimate != s.estimate); // update still applied
}

TEST_CASE("init then no updates leaves the estimate untouched") {
    const KalmanState s = kalman_init(7.5, 1e-6);
    CHECK(s.estimate == 7.5);
    CHECK(s.step == 0);
}
