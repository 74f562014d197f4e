#pragma once

#include <cstdint>
#include <initializer_list>

namespace spikegate {

// Derives an independent stream seed from a base seed and labels
// (splitmix64 finalizer applied per label).
inline std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
    auto fin = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = fin(seed);
    for (std::uint64_t l : labels) h = fin(h ^ fin(l));
    return h;
}

}  // namespace spikegate
