// SPDX-License-Identifier: Apache-2.0
//! \file momlat/rng.hpp
//! Counter-based seeding and the per-replica random stream.
#pragma once

#include <cmath>
#include <cstdint>

namespace momlat
{
//---------------------------------------------------------------------------//
/*!
 * SplitMix64 finalizer.
 *
 * Bit-exact definition (all arithmetic modulo 2^64):
 *   z = x + 0x9e3779b97f4a7c15
 *   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
 *   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
 *   return z ^ (z >> 31)
 */
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

//! Combine a seed with a counter: mix64(seed ^ mix64(counter)).
constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) noexcept
{
    return mix64(seed ^ mix64(counter));
}

//! Domain salts so environment and dynamics randomness never share a stream.
inline constexpr std::uint64_t kEnvironmentSalt = 0x656e7669726f6e6dull;
inline constexpr std::uint64_t kDynamicsSalt = 0x64796e616d696373ull;

//! Seed of the arrow field owned by `replica`.
constexpr std::uint64_t environment_seed(std::uint64_t base_seed,
                                         std::uint64_t replica) noexcept
{
    return mix64(base_seed ^ kEnvironmentSalt, replica);
}

//! Seed of the dynamics stream owned by `replica`.
constexpr std::uint64_t stream_seed(std::uint64_t base_seed,
                                    std::uint64_t replica) noexcept
{
    return mix64(base_seed ^ kDynamicsSalt, replica);
}

//---------------------------------------------------------------------------//
/*!
 * xoshiro256** stream, state filled from a SplitMix64 sequence.
 *
 * Every draw helper consumes exactly one 64-bit output, so the draw order of a
 * simulation step fully determines the stream position.
 */
class Stream
{
  public:
    using result_type = std::uint64_t;

    explicit Stream(std::uint64_t seed) noexcept
    {
        std::uint64_t x = seed;
        for (auto& s : s_)
        {
            s = mix64(x);
            x += 0x9e3779b97f4a7c15ull;
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() noexcept
    {
        std::uint64_t const result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t const t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    //! Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    //! Exponential with the given rate (inverse transform).
    double exponential(double rate) noexcept
    {
        return -std::log1p(-uniform()) / rate;
    }

    //! Fair coin from the top bit.
    bool coin() noexcept { return ((*this)() >> 63) != 0; }

    //! Uniform integer in [0, n) by multiply-high.
    std::uint32_t below(std::uint32_t n) noexcept
    {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace momlat
