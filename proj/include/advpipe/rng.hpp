#ifndef ADVPIPE_RNG_HPP
#define ADVPIPE_RNG_HPP

#include <cstdint>
#include <stdexcept>

namespace advpipe {

/// Deterministic counter-based PRNG (splitmix64). Identical seeds produce
/// identical draw sequences on every platform; all randomness in the
/// library flows through this type.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Uniform integer draw from the half-open range [lo, hi). A degenerate
/// range lo == hi returns lo. Exactly one raw draw is consumed per call,
/// degenerate ranges included, so stream positions stay aligned across
/// configurations that differ only in range widths.
inline int uniform_int(Rng& rng, int lo, int hi) {
    if (lo > hi) {
        throw std::invalid_argument("uniform_int: lo > hi");
    }
    const double u = rng.next_double();
    if (lo == hi) {
        return lo;
    }
    return lo + static_cast<int>(u * static_cast<double>(hi - lo));
}

/// Derives an independent child seed for worker `index` from a parent seed.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return mix.next_u64();
}

}  // namespace advpipe

#endif
