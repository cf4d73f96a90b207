#pragma once

#include <cstdint>

namespace permflow {

// The project-wide random source is splitmix64 used in counter mode: word t
// of a stream is mix(seed + (t+1) * GAMMA). Indexed access makes batched and
// one-at-a-time generation produce identical sequences, which is what the
// reproducibility contract ("bit-identical streams per (spec, seed)") needs.

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Word t (t = 0, 1, ...) of the stream identified by `seed`.
inline std::uint64_t stream_word(std::uint64_t seed, std::uint64_t t) {
    return splitmix64_mix(seed + (t + 1) * kSplitMixGamma);
}

/// Map a 64-bit word to a double in [0, 1) with 53 random bits.
inline double to_unit(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Sequential view over a counter stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next() { return stream_word(seed_, counter_++); }
    double next_unit() { return to_unit(next()); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }
    void skip(std::uint64_t words) { counter_ += words; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace permflow
