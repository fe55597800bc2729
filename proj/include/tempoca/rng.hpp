#pragma once

#include <cstdint>
#include <cstddef>
#include <string>

namespace tempoca {

// splitmix64: tiny, well-mixed, and ours, so streams are reproducible across
// platforms and standard library versions.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Folds a tag into a base seed so that (seed, tag) pairs give unrelated
// streams. Used to give every variable its own jitter stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL + (tag << 6) + (tag >> 2));
    splitmix64_next(s);
    return splitmix64_next(s);
}

// FNV-1a, used to tag jitter streams by series name rather than column
// position, so reordering the columns of a panel cannot change any estimate.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Uniform double in [0, 1) from 53 random bits.
inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

// Adds noise uniform in [-amplitude, amplitude] to a column in place.
// Distance ties make k-th neighbor radii ambiguous; an offset ten orders of
// magnitude under the data scale breaks the ties without moving any estimate.
inline void add_tie_jitter(double* col, std::size_t m, double amplitude, std::uint64_t seed) {
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < m; ++i)
        col[i] += amplitude * (2.0 * uniform01(state) - 1.0);
}

} // namespace tempoca
