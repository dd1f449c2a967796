#pragma once

#include <cstdint>

namespace collapselab {

// Counter-based splitmix64 generator. Substreams derived from (seed, shot)
// give platform-stable, order-independent sampling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t scramble(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        const std::uint64_t mixed =
            scramble(seed ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
        return SplitMix64(mixed);
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return scramble(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace collapselab
