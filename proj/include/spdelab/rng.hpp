#pragma once

#include <cstdint>

namespace spdelab {

/// Counter-based random words. Every draw is a pure function of
/// (seed, stream, step, slot), so streams can be generated in any order,
/// in parallel, and reproduce bit-for-bit.
namespace rng {

/// 64-bit finalizer (splitmix64 avalanche); bijective.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t word(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t step, std::uint64_t slot) {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (stream + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (step + 0xd1b54a32d192ed03ULL));
    h = mix64(h ^ (slot + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

/// Uniform in [0,1), 53-bit resolution.
inline double uniform01(std::uint64_t w) { return static_cast<double>(w >> 11) * 0x1.0p-53; }

/// Uniform in (0,1]; safe as a log argument.
inline double uniform01_open_left(std::uint64_t w) {
    return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; deterministic in the two input words.
double standard_normal(std::uint64_t w1, std::uint64_t w2);

}  // namespace rng
}  // namespace spdelab
