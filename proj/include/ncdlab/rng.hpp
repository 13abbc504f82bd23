#pragma once

// Seeding and bounded draws with bit-identical results on every platform.
// std::mt19937_64 is fully specified by the standard; the std distributions
// are not, so the bounded draws are done here.

#include <cstdint>
#include <random>
#include <string_view>

namespace ncdlab {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) noexcept {
    return splitmix64(seed ^ splitmix64(value + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) noexcept {
    return mix_seed(seed, fnv1a64(tag));
}

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; bound must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Uniform real in [0, 1) with 53 bits of precision.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class RandomIt>
void portable_shuffle(RandomIt first, RandomIt last, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = uniform_below(rng, i);
        using std::swap;
        swap(first[i - 1], first[j]);
    }
}

}  // namespace ncdlab
