#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace nclp {

// All randomness flows from one root seed through named streams, so adding
// a new check never perturbs the draws of an existing one.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::mt19937_64 seeded_stream(uint64_t root_seed, std::string_view name) {
    return std::mt19937_64(splitmix64(root_seed ^ fnv1a(name)));
}

} // namespace nclp
