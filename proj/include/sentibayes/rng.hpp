#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "error.hpp"

// Self-contained, fully specified random machinery so that seeded runs
// reproduce byte-identically on every platform. Engines from the
// splitmix64 / xoshiro256++ family (Blackman & Vigna), gamma variates by
// the Marsaglia-Tsang squeeze method.

namespace sentibayes {

// splitmix64 output mixing function.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept { return mix64(state_ += 0x9E3779B97F4A7C15ULL); }

private:
    std::uint64_t state_;
};

// Stream seed for the ordinal-th consumer derived from one user-facing
// seed; equals the (ordinal+1)-th splitmix64 output for that seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t ordinal) noexcept {
    return mix64(seed + (ordinal + 1) * 0x9E3779B97F4A7C15ULL);
}

// xoshiro256++ with splitmix64 state expansion.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& word : state_) word = sm.next();
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1); endpoints are unreachable.
    double uniform() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal, Box-Muller cosine branch (two uniforms per variate).
    double normal() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

// Gamma(shape, scale 1) variate. Marsaglia-Tsang squeeze for shape >= 1;
// shapes below 1 use the boost G(shape+1) * U^(1/shape).
inline double gamma_variate(Xoshiro256pp& rng, double shape) {
    if (!(shape > 0.0)) {
        throw validation_error("gamma_variate: shape must be positive");
    }
    if (shape < 1.0) {
        const double g = gamma_variate(rng, shape + 1.0);
        return g * std::pow(rng.uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace sentibayes
