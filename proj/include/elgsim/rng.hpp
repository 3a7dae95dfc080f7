#pragma once

#include <cstdint>

namespace elgsim {

// SplitMix64 step: increment by the golden-gamma constant, then avalanche.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: every word is a pure function of
// (seed, path_index, stage), so a simulation is reproducible bit for bit
// no matter how paths are scheduled across threads.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t path_index,
                                  std::uint64_t stage) {
    return splitmix64(splitmix64(splitmix64(seed) ^ path_index) ^ stage);
}

// Top 53 bits -> double in [0, 1).
inline double uniform01(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Integer in [0, m) by multiply-shift.
inline std::uint64_t bounded_int(std::uint64_t word, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(word) * m) >> 64);
}

}  // namespace elgsim
