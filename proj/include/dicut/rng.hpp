#pragma once

#include <cstdint>
#include <random>

namespace dicut {

// All randomness flows through mt19937_64 (fully specified by the standard)
// plus the helpers below; std::uniform_int_distribution is avoided because
// its output is implementation-defined.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Independent seed for (base, role, index); used to give every trial/branch
// its own generator so results do not depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t role, std::uint64_t index = 0) {
    return splitmix64(splitmix64(base ^ splitmix64(role)) ^ index);
}

// Generator from a user-facing seed. The seed is mixed first: mt19937_64
// seeded with raw sequential integers produces correlated early outputs.
inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

// Unbiased uniform draw from [0, bound) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x <= limit) return x % bound;
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace dicut
