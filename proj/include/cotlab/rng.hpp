#pragma once

#include <cstdint>

namespace cotlab {

// splitmix64: used only to expand seeds into full xoshiro states and to
// derive independent per-stream seeds (seed, stream) -> seed'.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    std::uint64_t a = splitmix64_next(s);
    std::uint64_t b = splitmix64_next(s);
    return a ^ (b << 1);
}

// xoshiro256** (Blackman/Vigna), seeded via splitmix64.
class xoshiro256ss {
public:
    explicit xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next() {
        std::uint64_t r = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }

    // 53-bit mantissa uniform in [0,1); every value is an exact dyadic
    // k / 2^53, which the sawtooth fast path exploits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in (0,1): remaps the single k=0 outcome to 1/2^53 so continued
    // fraction code never sees an exact 0
    double uniform01_open() {
        std::uint64_t k = next() >> 11;
        if (k == 0) k = 1;
        return static_cast<double>(k) * 0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace cotlab
