#pragma once

#include <cstdint>

namespace logicforge {

// splitmix64 (Steele, Lea & Flood). Platform-exact, unlike the standard
// library distributions, so every stream derived from a config seed is
// reproducible across compilers.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Plain modulo: the bias for the n we use
    // (fan-in pools, batch counts) is ~2^-50 and determinism matters more.
    uint64_t bounded(uint64_t n) { return next() % n; }

    // Uniform in [0, 1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

// Derives an independent stream key from a base seed and salts by running
// each word through one splitmix64 step. Streams for masks, weight init,
// epoch shuffling and sampling must not alias even when salts collide
// numerically, so each call site passes a distinct domain constant.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    SplitMix64 g(seed);
    uint64_t k = g.next();
    k ^= SplitMix64(a + 0x632be59bd9b4e019ULL).next();
    k ^= SplitMix64(b + 0x9e6c63d0a0f3e4d5ULL).next();
    k ^= SplitMix64(c + 0xc2b2ae3d27d4eb4fULL).next();
    return k;
}

namespace rng_domain {
constexpr uint64_t kMask = 0x4d41534bULL;     // "MASK"
constexpr uint64_t kWeights = 0x57454947ULL;  // "WEIG"
constexpr uint64_t kShuffle = 0x53485546ULL;  // "SHUF"
constexpr uint64_t kSamples = 0x53414d50ULL;  // "SAMP"
constexpr uint64_t kSplit = 0x53504c54ULL;    // "SPLT"
}  // namespace rng_domain

}  // namespace logicforge
