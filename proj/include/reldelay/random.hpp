#pragma once

#include <cstdint>

namespace reldelay::rng {

// Independent randomness streams. Every random decision in the library is a
// pure function of (seed, stream, counters), so results never depend on
// evaluation order or thread count.
enum class Stream : std::uint64_t {
    PointCount = 1,
    PointPosition = 2,
    Thinning = 3,
    Activation = 4,
    PairSelection = 5,
    Derive = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Hash of a seed and up to three counters in a given stream.
std::uint64_t hash(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b = 0,
                   std::uint64_t c = 0) noexcept;

/// Uniform variate strictly inside (0, 1).
double uniform(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b = 0,
               std::uint64_t c = 0) noexcept;

/// Child seed for a sub-experiment (repeat, lambda index, trial, ...).
std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

}  // namespace reldelay::rng
