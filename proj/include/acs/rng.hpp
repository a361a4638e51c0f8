// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <initializer_list>

#include "acs/numerics.hpp"

namespace acs
{

// What a random stream is used for. Each (seed, purpose, indices...) tuple
// maps to an independent stream, so trials can run in any order.
enum class Purpose : std::uint64_t
{
    Scenario = 1,
    UplinkChannel = 2,
    UplinkNoise = 3,
    DownlinkChannel = 4,
    Pilot = 5,
    DownlinkNoise = 6,
    Test = 99,
};

// Counter-based generator: output i is splitmix64(key + i * gamma).
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    // Key derived from the master seed and an index path.
    static RandomStream derive(std::uint64_t master_seed, Purpose purpose,
                               std::initializer_list<std::uint64_t> indices = {});

    std::uint64_t next_u64();
    double uniform();        // (0, 1)
    double normal();         // N(0, 1)
    cx complex_normal();     // CN(0, 1): real and imaginary parts N(0, 1/2)
    std::uint64_t uniform_int(std::uint64_t n); // [0, n)

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

CVec gaussian_complex(std::size_t n, RandomStream &stream);
CVec gaussian_complex(std::size_t n, std::uint64_t seed);

} // namespace acs
