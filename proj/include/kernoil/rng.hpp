#pragma once

#include <cmath>
#include <cstdint>

namespace kernoil {

/// SplitMix64 counter generator. Small, fast, and byte-for-byte reproducible
/// across platforms, which the bootstrap's determinism contract requires;
/// standard-library distributions make no such guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection-free multiply-shift map; the
    /// bias for the block counts used here is far below 2^-32.
    std::uint64_t uniform_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; consumes two uniforms per draw so the
    /// stream position stays predictable.
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 == 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t state_;
};

/// Independent stream for replication `index` under a master seed. Streams
/// depend only on (seed, index), never on execution order, so doubled
/// replication counts reuse the first half of the draws unchanged.
inline Rng replication_stream(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    mixer.next();
    return Rng(mixer.next());
}

}  // namespace kernoil
