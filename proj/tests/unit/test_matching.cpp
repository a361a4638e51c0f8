// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "acs/opt/matching.hpp"
#include "acs/rng.hpp"

using namespace acs;
using namespace acs::opt;

namespace
{

std::size_t permutation_oracle(const std::vector<std::vector<bool>> &adj)
{
    const std::size_t n = adj.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i)
            c += adj[i][perm[i]];
        best = std::max(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("matching examples")
{
    MatchingInstance k33{3, 3, {}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            k33.edges.emplace_back(i, j);
    const auto r = max_matching(k33);
    CHECK(r.size == 3);
    CHECK(is_matching(k33, r.edges));

    MatchingInstance star{1, 5, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}}};
    CHECK(max_matching(star).size == 1);

    MatchingInstance empty{4, 2, {}};
    CHECK(max_matching(empty).size == 0);

    CHECK_THROWS_AS(max_matching(MatchingInstance{1, 1, {{0, 0}, {0, 0}}}), InvalidArgument);
    CHECK_THROWS_AS(max_matching(MatchingInstance{1, 1, {{0, 1}}}), InvalidArgument);
}

TEST_CASE("matching needs augmenting paths")
{
    // greedy on left order takes (0,0) and blocks 1; maximum is 2
    MatchingInstance g{2, 2, {{0, 0}, {0, 1}, {1, 0}}};
    const auto r = max_matching(g);
    CHECK(r.size == 2);
    CHECK(is_matching(g, r.edges));
}

TEST_CASE("matching equals permutation brute force on random 8x8 graphs")
{
    for (std::uint64_t t = 0; t < 200; ++t)
    {
        auto s = RandomStream::derive(400, Purpose::Test, {t});
        const double p = 0.1 + 0.5 * s.uniform();
        std::vector<std::vector<bool>> adj(8, std::vector<bool>(8, false));
        MatchingInstance g{8, 8, {}};
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
                if (s.uniform() < p)
                {
                    adj[i][j] = true;
                    g.edges.emplace_back(i, j);
                }
        const auto r = max_matching(g);
        REQUIRE(is_matching(g, r.edges));
        REQUIRE(r.size == permutation_oracle(adj));
    }
}

TEST_CASE("matching on rectangular graphs")
{
    for (std::uint64_t t = 0; t < 50; ++t)
    {
        auto s = RandomStream::derive(401, Purpose::Test, {t});
        MatchingInstance g{3 + s.uniform_int(4), 3 + s.uniform_int(4), {}};
        const std::size_t n = std::max(g.left, g.right);
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < g.left; ++i)
            for (std::size_t j = 0; j < g.right; ++j)
                if (s.uniform() < 0.35)
                {
                    adj[i][j] = true;
                    g.edges.emplace_back(i, j);
                }
        REQUIRE(max_matching(g).size == permutation_oracle(adj));
    }
}
