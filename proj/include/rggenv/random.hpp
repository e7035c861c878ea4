#pragma once

#include <cstdint>

namespace rggenv {

// Counter-based generator. Every draw is a pure function of a key and a
// counter, so streams can be split, skipped or evaluated in any order:
//
//   word(key, counter) = mix(mix(key ^ G * (counter + 1)) + counter)
//
// where mix is the SplitMix64 finalizer and G the 64-bit golden ratio.
// Two rounds make adjacent counters statistically unrelated.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t counter_word(std::uint64_t key, std::uint64_t counter) noexcept {
    constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
    return mix64(mix64(key ^ (golden * (counter + 1))) + counter);
}

/// Derive a child key, e.g. a per-episode or per-point key from a run seed.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t stream) noexcept {
    return mix64(counter_word(key, stream) ^ 0xd1b54a32d192ed03ULL);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t word) noexcept {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

constexpr double unit_draw(std::uint64_t key, std::uint64_t counter) noexcept {
    return to_unit(counter_word(key, counter));
}

}  // namespace rggenv
