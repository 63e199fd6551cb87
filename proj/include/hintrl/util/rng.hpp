#pragma once

#include <cstdint>

namespace hintrl::util {

// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
// std:: distributions so that identical seeds give identical runs across
// standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, n). n must be > 0.
    int below(int n) {
        // rejection sampling keeps the draw exactly uniform
        const uint64_t un = static_cast<uint64_t>(n);
        const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        uint64_t v = next();
        while (v >= limit) v = next();
        return static_cast<int>(v % un);
    }

    // Uniform double in [0, 1).
    double unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool chance(double p) { return unit() < p; }

private:
    uint64_t state_;
};

// Stream derivation: mixes a seed with domain tags so that independent
// consumers (workers, episodes, eval) never share a stream.
inline uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t mix(uint64_t a, uint64_t b, uint64_t c) { return mix(mix(a, b), c); }
inline uint64_t mix(uint64_t a, uint64_t b, uint64_t c, uint64_t d) { return mix(mix(a, b, c), d); }

}  // namespace hintrl::util
