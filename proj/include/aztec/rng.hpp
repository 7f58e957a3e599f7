#pragma once

#include <cstdint>
#include <random>

namespace aztec {

// All randomness in the toolkit: std::mt19937_64 engines whose seeds are
// derived from (seed, stream) by splitmix64 mixing. The identifier below is
// recorded in every output manifest. Distinct streams are statistically
// independent, so samples can be generated in parallel and bit-reproduced.
inline constexpr const char* kRngAlgorithm = "mt19937_64+splitmix64-streams";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull);
    std::uint64_t a = splitmix64(s), b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace aztec
