#pragma once

#include <cstdint>
#include <vector>

namespace chessy {

/// splitmix64 finalizer. Used as the one deterministic data generator in the
/// project: EMG sample streams and write-step payloads both draw from it, so
/// functional traces are content-sensitive and reproducible from a seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Byte `index` of the seeded pattern stream.
inline std::uint8_t pattern_byte(std::uint64_t seed, std::uint64_t index) {
    return static_cast<std::uint8_t>(mix64(seed ^ mix64(index)));
}

inline std::vector<std::uint8_t> pattern_bytes(std::uint64_t seed, std::uint64_t start,
                                               std::uint64_t count) {
    std::vector<std::uint8_t> out(count);
    for (std::uint64_t i = 0; i < count; ++i)
        out[i] = pattern_byte(seed, start + i);
    return out;
}

} // namespace chessy
