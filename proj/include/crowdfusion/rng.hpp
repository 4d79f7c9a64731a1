#pragma once

#include <cstdint>

// Counter-derived random streams. Every consumer gets its own stream keyed by
// (master seed, trial index, purpose tag), so results do not depend on how
// trials are partitioned across threads.

namespace crowdfusion {

// SplitMix64 finalizer. Good avalanche, cheap, stable across platforms.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    // uniform in [0, n) without modulo bias
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t v = next_u64();
        while (v > limit) v = next_u64();
        return v % n;
    }

private:
    std::uint64_t state_;
};

// Stable stream derivation. Streams for distinct (a, b) pairs are
// statistically independent; the mapping is part of the determinism contract.
inline RngStream derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t k = mix64(seed ^ 0x8c2f1d7a9b3e5c11ULL);
    k = mix64(k ^ mix64(a));
    k = mix64(k ^ mix64(b ^ 0x5851f42d4c957f2dULL));
    return RngStream(k);
}

// stream purposes; also part of the determinism contract
namespace purpose {
constexpr std::uint64_t kTruth = 1;
constexpr std::uint64_t kProfiles = 2;
constexpr std::uint64_t kAnswers = 3;
constexpr std::uint64_t kTies = 4;
constexpr std::uint64_t kBenchmark = 5;
constexpr std::uint64_t kTrainingGold = 6;
constexpr std::uint64_t kTrainingProfiles = 7;
constexpr std::uint64_t kTrainingAnswers = 8;
constexpr std::uint64_t kForcedVotes = 9;
} // namespace purpose

} // namespace crowdfusion
