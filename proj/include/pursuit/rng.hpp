#pragma once

/**
 * @file rng.hpp
 * @brief Seeded, cross-platform deterministic random helpers.
 *
 * std::mt19937_64 is fully specified by the standard, but the standard
 * distribution adaptors are not; the samplers here are written out explicitly
 * so a given seed reproduces byte-identical results on every platform.
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "pursuit/vec.hpp"

namespace pursuit {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal via Box-Muller (one value per call, deterministic order).
inline double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform direction on the unit sphere in dimension n.
inline Vec random_unit(Rng& rng, std::size_t n) {
    while (true) {
        std::vector<double> c(n);
        for (double& x : c) x = standard_normal(rng);
        Vec v{std::move(c)};
        if (norm(v) > 1e-8) return unitize(v);
    }
}

/// Uniform point in the closed unit ball in dimension n.
inline Vec random_in_ball(Rng& rng, std::size_t n) {
    const double r = std::pow(uniform01(rng), 1.0 / static_cast<double>(n));
    return random_unit(rng, n) * r;
}

}  // namespace pursuit
