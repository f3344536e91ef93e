#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gbsmock {

/// The generator every sampler uses. Bits and uniforms are taken from the raw
/// 64-bit output so streams are identical across standard libraries.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Sub-seed for one purpose ("sampler", "subsets", "bootstrap", ...) and an
/// optional stream index (chain number, run number). Purposes are hashed with
/// FNV-1a and mixed with the user seed through splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t stream = 0);

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), unbiased (Lemire rejection).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// Fisher-Yates shuffle using uniform_index.
template <typename It>
void shuffle(It first, It last, Rng& rng) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        auto j = uniform_index(rng, i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace gbsmock
