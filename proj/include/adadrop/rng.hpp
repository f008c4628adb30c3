#pragma once

#include <cmath>
#include <cstdint>

// Deterministic seeded random streams: SplitMix64 seeding a xoshiro256++
// generator (Blackman & Vigna). Every random decision in the library draws
// from a stream derived from (master_seed, stream_id, epoch), so reruns of
// the same configuration are bit-identical.

namespace adadrop {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stateless mix of a single 64-bit value (SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64_next(s);
}

class Xoshiro256PP {
public:
    using result_type = std::uint64_t;

    Xoshiro256PP() : Xoshiro256PP(0) {}

    explicit Xoshiro256PP(std::uint64_t seed) { this->seed(seed); }

    void seed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return UINT64_MAX; }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Logical stream roles within one experiment.
enum class StreamId : std::uint64_t {
    sampling = 1,
    acceptance = 2,
    init = 3,
    data = 4,
};

// One generator per (master_seed, stream_id, epoch); distinct triples give
// statistically independent streams.
inline Xoshiro256PP derive_stream(std::uint64_t master_seed, StreamId id, std::int64_t epoch) {
    const std::uint64_t seed = master_seed
        ^ mix64(static_cast<std::uint64_t>(id))
        ^ (static_cast<std::uint64_t>(epoch) * 0x9E3779B97F4A7C15ULL);
    return Xoshiro256PP(seed);
}

// Uniform double in [0, 1), 53-bit resolution.
inline double uniform01(Xoshiro256PP& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, bound) via Lemire's multiply-reject method.
inline std::uint64_t uniform_below(Xoshiro256PP& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const unsigned __int128 m =
            static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(bound);
        if (static_cast<std::uint64_t>(m) >= threshold)
            return static_cast<std::uint64_t>(m >> 64);
    }
}

// Standard normal via Box-Muller; avoids std::normal_distribution so output
// does not depend on the standard library implementation.
inline double normal01(Xoshiro256PP& rng) {
    const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01(rng);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace adadrop
