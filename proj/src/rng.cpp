// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/rng.hpp"

#include <cmath>
#include <numbers>

namespace acs
{

namespace
{

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

RandomStream RandomStream::derive(std::uint64_t master_seed, Purpose purpose,
                                  std::initializer_list<std::uint64_t> indices)
{
    std::uint64_t key = mix64(master_seed + kGamma);
    key = mix64(key ^ mix64(static_cast<std::uint64_t>(purpose) * kGamma));
    std::uint64_t depth = 1;
    for (auto idx : indices)
    {
        key = mix64(key + mix64((idx + 1) * kGamma + depth));
        ++depth;
    }
    return RandomStream(key);
}

std::uint64_t RandomStream::next_u64()
{
    return mix64(key_ + (++counter_) * kGamma);
}

double RandomStream::uniform()
{
    // 53 random bits, shifted off zero
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal()
{
    double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cx RandomStream::complex_normal()
{
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

std::uint64_t RandomStream::uniform_int(std::uint64_t n)
{
    if (n == 0)
        throw InvalidArgument("uniform_int: empty range");
    // rejection sampling keeps the distribution exact
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do
        v = next_u64();
    while (v >= limit);
    return v % n;
}

CVec gaussian_complex(std::size_t n, RandomStream &stream)
{
    CVec out(n);
    for (auto &v : out)
        v = stream.complex_normal();
    return out;
}

CVec gaussian_complex(std::size_t n, std::uint64_t seed)
{
    RandomStream s(seed);
    return gaussian_complex(n, s);
}

} // namespace acs
