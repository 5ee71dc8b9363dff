#pragma once

#include <cstdint>
#include <string_view>

namespace lexrel {

/// Seed constant for feature hashing. Published and fixed: serialized models
/// and golden tests depend on featurization being identical everywhere.
inline constexpr std::uint64_t kFeatureHashSeed = 0x6C657872656C5EEDull;

/// Stable 64-bit string hash: FNV-1a with a splitmix-style finalizer so the
/// high bits are usable as a sign bit. Byte-order independent and identical
/// across platforms, compilers and runs.
inline std::uint64_t stable_hash64(std::string_view s, std::uint64_t seed = kFeatureHashSeed) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    h ^= h >> 30;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 27;
    h *= 0x94D049BB133111EBull;
    h ^= h >> 31;
    return h;
}

} // namespace lexrel
