#pragma once

// Counter-based random streams: every draw is a pure function of a key
// tuple, so results do not depend on draw order or thread count.

#include <cstdint>

namespace lvpqa::rng {

enum class Stream : std::uint64_t {
    DriverAmplitude = 1,
    ShadowBasis = 2,
    ShadowOutcome = 3,
};

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t keyed_bits(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t counter = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return splitmix64(h ^ counter);
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double keyed_uniform(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b = 0,
                               std::uint64_t counter = 0) {
    return static_cast<double>(keyed_bits(seed, stream, a, b, counter) >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by multiply-shift on the top 32 bits.
constexpr std::uint32_t keyed_below(std::uint32_t bound, std::uint64_t seed, Stream stream, std::uint64_t a,
                                    std::uint64_t b = 0) {
    const std::uint64_t top = keyed_bits(seed, stream, a, b) >> 32;
    return static_cast<std::uint32_t>((top * bound) >> 32);
}

}  // namespace lvpqa::rng
