#pragma once

#include <cstdint>

namespace eclab {

/// SplitMix64 (Steele, Lea, Flood). Every stochastic routine takes an explicit
/// 64-bit seed and builds one of these; nothing reads ambient entropy.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Seed of the independent stream `index` derived from `seed`. Sample paths of
/// a Monte Carlo experiment use stream_seed(seed, i) for i = 0, 1, ...
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return mix.next();
}

}  // namespace eclab
