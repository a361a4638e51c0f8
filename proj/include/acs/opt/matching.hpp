// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace acs::opt
{

using Edge = std::pair<std::size_t, std::size_t>; // (left, right)

struct MatchingInstance
{
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<Edge> edges;

    void validate() const; // indices in range, no duplicates
};

struct MatchingResult
{
    std::size_t size = 0;
    std::vector<Edge> edges; // sorted by left index
};

// Hopcroft-Karp maximum cardinality matching.
MatchingResult max_matching(const MatchingInstance &g);

bool is_matching(const MatchingInstance &g, const std::vector<Edge> &m);

} // namespace acs::opt
