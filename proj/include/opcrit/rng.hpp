#pragma once
#include <cstdint>

namespace opcrit {

// 64-bit finalizer (SplitMix64 increment + mix). Bijective, good avalanche;
// used both for keyed coordinate hashing and for seeding stream generators.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Keyed hash of a small tuple: chain the finalizer over the words.
inline uint64_t keyed_hash(uint64_t key, uint64_t a, uint64_t b, uint64_t c) {
    uint64_t h = mix64(key);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// Top 53 bits -> uniform double in [0, 1).
inline double u64_to_unit(uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// xoshiro256++ stream generator (Blackman/Vigna). Fast enough for ~1e10
// Bernoulli draws; state seeded through mix64 so any 64-bit seed is fine.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s_) w = mix64(x++);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double uniform() { return u64_to_unit(next()); }          // [0, 1)
    double uniform_pos() { return 1.0 - uniform(); }          // (0, 1]
    bool bernoulli(double p) { return uniform() <= p; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace opcrit
