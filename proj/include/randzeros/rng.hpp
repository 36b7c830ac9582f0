#pragma once

#include <complex>
#include <cstdint>
#include <cmath>

namespace randzeros {

// Identifies one reproducible random stream. The same (root_seed,
// stream_index) pair always produces the same draw sequence; distinct
// stream_index values give independent streams (see make_stream below).
struct RandomSeed {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_index = 0;
};

namespace detail {

constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kSplitMixGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

// xoshiro256++ (Blackman & Vigna). Small, fast, and the state seeding below
// is the reference-recommended SplitMix64 expansion.
class Xoshiro256pp {
public:
    Xoshiro256pp(std::uint64_t s0, std::uint64_t s1, std::uint64_t s2, std::uint64_t s3)
        : s_{s0, s1, s2, s3} {}

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal pair via Box-Muller. Consumes exactly two words, so the
    // draw count per sample is fixed and streams stay aligned.
    void next_normal_pair(double& n0, double& n1) {
        const double u1 = 1.0 - next_unit(); // (0, 1]; keeps log() finite
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        n0 = radius * std::cos(angle);
        n1 = radius * std::sin(angle);
    }

    // Standard complex Gaussian: Re and Im independent N(0, 1/2), E|c|^2 = 1.
    std::complex<double> next_complex_gaussian() {
        double a, b;
        next_normal_pair(a, b);
        const double inv_sqrt2 = 0.70710678118654752440;
        return {a * inv_sqrt2, b * inv_sqrt2};
    }

private:
    std::uint64_t s_[4];
};

// Stream-splitting rule, fixed for reproducibility:
//   sm_state = root_seed + stream_index * 0xD1B54A32D192ED03
//   state[i] = splitmix64(sm_state), i = 0..3
// The per-stream offset constant differs from SplitMix64's own gamma, so the
// four-word windows of distinct streams never overlap for realistic indices.
inline Xoshiro256pp make_stream(const RandomSeed& seed) {
    std::uint64_t sm = seed.root_seed + seed.stream_index * 0xD1B54A32D192ED03ull;
    const std::uint64_t s0 = detail::splitmix64(sm);
    const std::uint64_t s1 = detail::splitmix64(sm);
    const std::uint64_t s2 = detail::splitmix64(sm);
    const std::uint64_t s3 = detail::splitmix64(sm);
    return Xoshiro256pp(s0, s1, s2, s3);
}

} // namespace randzeros
