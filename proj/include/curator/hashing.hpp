#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace curator {

// 64-bit FNV-1a over raw bytes.
inline uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// splitmix64 finalizer; good avalanche for mixing counters and seeds.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic stream of 64-bit values derived from a seed. Used everywhere a
// seeded random choice is needed so results are identical across platforms
// (std::shuffle / std::uniform_int_distribution are implementation-defined).
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased value in [0, bound) via rejection sampling.
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    uint64_t state_;
};

// Fisher-Yates with our own generator, so shuffles are reproducible bit for bit.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, uint64_t seed) {
    SplitMix64 rng(seed);
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

// x * y mod 2^61-1 without overflow.
inline uint64_t mulmod61(uint64_t x, uint64_t y) {
    constexpr uint64_t kPrime = (1ULL << 61) - 1;
    __uint128_t p = static_cast<__uint128_t>(x) * y;
    uint64_t lo = static_cast<uint64_t>(p & kPrime);
    uint64_t hi = static_cast<uint64_t>(p >> 61);
    uint64_t r = lo + hi;
    if (r >= kPrime) r -= kPrime;
    return r;
}

constexpr uint64_t kMersenne61 = (1ULL << 61) - 1;

} // namespace curator
