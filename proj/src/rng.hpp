// Deterministic random stream with counter-based substream derivation.
//
// The generator is xoshiro256** seeded through a splitmix64 expansion, so the
// same (master seed, stream index) pair yields the same sequence on every
// platform. Substreams let independent frames or sweep points draw from
// disjoint streams regardless of execution order, which keeps parallel and
// serial runs bit-identical.

#pragma once

#include <cstdint>

namespace irsa {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// Derives the seed of substream `stream` from a master seed.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream)
{
    std::uint64_t state = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return detail::splitmix64(state);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed)
    {
        std::uint64_t state = seed;
        for (auto& word : state_)
            word = detail::splitmix64(state);
    }

    static Rng substream(std::uint64_t master, std::uint64_t stream)
    {
        return Rng(split_seed(master, stream));
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Unbiased; `bound` must be > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        // Lemire's multiply-shift rejection method.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_[4];
};

} // namespace irsa
