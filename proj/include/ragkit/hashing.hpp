#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ragkit {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

// IEEE CRC-32; chainable via `seed` for streaming use.
std::uint32_t crc32(const void* data, std::size_t size, std::uint32_t seed = 0);

// splitmix64: tiny deterministic PRNG used wherever reproducibility across
// platforms matters (std:: distributions are implementation-defined).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    // uniform in [-1, 1]
    double next_signed_unit() {
        return static_cast<double>(next() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
    }
};

std::uint64_t hash_file(const std::string& path); // fnv1a64 of the file bytes

} // namespace ragkit
