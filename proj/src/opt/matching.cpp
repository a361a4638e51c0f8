// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/opt/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "acs/errors.hpp"

namespace acs::opt
{

void MatchingInstance::validate() const
{
    std::set<Edge> seen;
    for (const auto &e : edges)
    {
        if (e.first >= left || e.second >= right)
            throw InvalidArgument("MatchingInstance: edge index out of range");
        if (!seen.insert(e).second)
            throw InvalidArgument("MatchingInstance: duplicate edge");
    }
}

bool is_matching(const MatchingInstance &g, const std::vector<Edge> &m)
{
    std::set<Edge> present(g.edges.begin(), g.edges.end());
    std::vector<bool> used_l(g.left, false), used_r(g.right, false);
    for (const auto &e : m)
    {
        if (!present.count(e) || used_l[e.first] || used_r[e.second])
            return false;
        used_l[e.first] = used_r[e.second] = true;
    }
    return true;
}

MatchingResult max_matching(const MatchingInstance &g)
{
    g.validate();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();

    std::vector<std::vector<std::size_t>> adj(g.left);
    for (const auto &[l, r] : g.edges)
        adj[l].push_back(r);
    for (auto &a : adj)
        std::sort(a.begin(), a.end());

    std::vector<std::size_t> match_l(g.left, kNone), match_r(g.right, kNone), dist(g.left);

    auto bfs = [&] {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < g.left; ++u)
        {
            if (match_l[u] == kNone)
            {
                dist[u] = 0;
                q.push(u);
            }
            else
                dist[u] = kFar;
        }
        while (!q.empty())
        {
            const std::size_t u = q.front();
            q.pop();
            for (auto v : adj[u])
            {
                const std::size_t w = match_r[v];
                if (w == kNone)
                    found = true;
                else if (dist[w] == kFar)
                {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    // iterative DFS along the BFS layering
    auto augment = [&](std::size_t root) {
        std::vector<std::size_t> stack{root}, next(g.left, 0), via;
        while (!stack.empty())
        {
            const std::size_t u = stack.back();
            if (next[u] == adj[u].size())
            {
                dist[u] = kFar;
                stack.pop_back();
                if (!via.empty())
                    via.pop_back();
                continue;
            }
            const std::size_t v = adj[u][next[u]++];
            const std::size_t w = match_r[v];
            if (w == kNone)
            {
                // flip the path root -> ... -> u -> v
                via.push_back(v);
                for (std::size_t i = 0; i < stack.size(); ++i)
                {
                    match_l[stack[i]] = via[i];
                    match_r[via[i]] = stack[i];
                }
                return true;
            }
            if (dist[w] == dist[u] + 1)
            {
                via.push_back(v);
                stack.push_back(w);
            }
        }
        return false;
    };

    while (bfs())
        for (std::size_t u = 0; u < g.left; ++u)
            if (match_l[u] == kNone)
                augment(u);

    MatchingResult out;
    for (std::size_t u = 0; u < g.left; ++u)
        if (match_l[u] != kNone)
            out.edges.emplace_back(u, match_l[u]);
    out.size = out.edges.size();
    return out;
}

} // namespace acs::opt
