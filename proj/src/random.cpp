#include "reldelay/random.hpp"

namespace reldelay::rng {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b,
                   std::uint64_t c) noexcept
{
    std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ (b * 0xd1342543de82ef95ULL));
    h = splitmix64(h ^ (c * 0xaf251af3b0f025b5ULL));
    return h;
}

double uniform(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b,
               std::uint64_t c) noexcept
{
    // 53 random bits, shifted half an ulp so 0 and 1 are both excluded.
    const std::uint64_t bits = hash(seed, stream, a, b, c) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept
{
    return hash(seed, Stream::Derive, a, b, c);
}

}  // namespace reldelay::rng
