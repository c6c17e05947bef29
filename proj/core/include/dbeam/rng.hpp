#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dbeam {

// Deterministic, stdlib-independent PRNG (splitmix64). Every random draw in
// the library flows from an explicit 64-bit seed so runs are reproducible
// across platforms and independent of how work is chunked across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + uniform() * (b - a); }

    /// Standard normal via Box-Muller. Two uniforms per draw, no cached spare,
    /// so the stream position is a pure function of the draw count.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double gaussian(double mean, double stddev) {
        return mean + stddev * gaussian();
    }

private:
    std::uint64_t state_;
};

/// Mixes a master seed with stream identifiers (trial index, node id, ...)
/// into an independent child seed. Trials seeded this way give identical
/// results regardless of the degree of parallelism.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    Rng mix(master ^ (a * 0xD1342543DE82EF95ull) ^
            (b * 0xA0761D6478BD642Full) ^ (c * 0xE7037ED1A0B428DBull));
    return mix.next_u64();
}

} // namespace dbeam
