#pragma once

#include <cstdint>
#include <random>

namespace lowensim {

/// SplitMix64 step; the documented seed-derivation function. Instance k of a
/// seeded run uses splitmix64(seed + k + 1) to seed a std::mt19937_64, so
/// sweep points are independent and reproducible across languages.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base + index + 1);
}

}  // namespace lowensim
