#pragma once

#include <cstdint>

namespace nonlocal {

/// Counter-based pseudo-random generator.
///
/// Each draw is a pure function of (seed, index) built on the splitmix64
/// finalizer, so streams are reproducible across platforms and can be
/// evaluated in any order:
///
///   z = seed + (index + 1) * 0x9E3779B97F4A7C15
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
///   uniform01 = (z >> 11) * 2^-53
struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t bits(std::uint64_t index) const {
        std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01(std::uint64_t index) const {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    /// Uniform in [-amplitude, amplitude).
    double symmetric(std::uint64_t index, double amplitude) const {
        return amplitude * (2.0 * uniform01(index) - 1.0);
    }
};

}  // namespace nonlocal
