#pragma once

#include <cstdint>
#include <random>

namespace ipf {

// Noise streams are keyed by (seed, tag, frame, index) so every draw is
// independent of evaluation order and thread count.

inline constexpr std::uint64_t kStreamPredict = 0x70726564; // filter prediction noise
inline constexpr std::uint64_t kStreamResample = 0x72736d70; // condensation resampling

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Fresh engine for one (seed, tag, frame, index) tuple.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t tag,
                                     std::uint64_t frame, std::uint64_t index) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ tag);
    k = splitmix64(k ^ frame);
    k = splitmix64(k ^ index);
    return std::mt19937_64(k);
}

/// Handle describing where a filter step draws its per-particle noise from.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t frame = 0;
    std::uint64_t first_index = 0; // stream index of the first particle produced

    std::mt19937_64 engine(std::uint64_t tag, std::uint64_t offset) const {
        return stream_engine(seed, tag, frame, first_index + offset);
    }
};

} // namespace ipf
