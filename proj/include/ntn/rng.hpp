#pragma once

#include <cstdint>
#include <random>

namespace ntn {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for an independent stream identified by (seed, stream, index, sub).
/// Streams never depend on execution order, so trial results are identical
/// for any degree of parallelism.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index = 0, std::uint64_t sub = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
    h = splitmix64(h ^ index);
    return splitmix64(h ^ (sub + 0x632be59bd9b4e019ULL));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Stream tags used by the scenarios.
namespace streams {
inline constexpr std::uint64_t deployment = 1;
inline constexpr std::uint64_t haps = 2;
inline constexpr std::uint64_t satellites = 3;
inline constexpr std::uint64_t users = 4;
inline constexpr std::uint64_t blockage = 5;
inline constexpr std::uint64_t fading = 6;
inline constexpr std::uint64_t hops = 7;
inline constexpr std::uint64_t sub_bands = 8;
inline constexpr std::uint64_t capacity_table = 9;
inline constexpr std::uint64_t trial = 10;
} // namespace streams

} // namespace ntn
