// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "acs/opt/lp.hpp"
#include "acs/rng.hpp"
#include "oracles.hpp"

using namespace acs;
using namespace acs::opt;

namespace
{

// Enumerates every basic solution of {rows, bounds} and returns the best
// feasible objective, or nullopt when no vertex is feasible.
std::optional<double> vertex_enumeration(const LinearProgram &lp)
{
    const std::size_t n = lp.num_vars();
    // candidate hyperplanes: each row as equality, each finite bound
    std::vector<std::pair<RVec, double>> planes;
    std::vector<bool> forced;
    for (const auto &c : lp.constraints)
    {
        RVec a(n, 0.0);
        for (const auto &t : c.terms)
            a[t.var] += t.coeff;
        planes.emplace_back(a, c.rhs);
        forced.push_back(c.sense == Sense::Equal);
    }
    for (std::size_t j = 0; j < n; ++j)
    {
        RVec e(n, 0.0);
        e[j] = 1.0;
        planes.emplace_back(e, lp.lower[j]);
        forced.push_back(false);
        planes.emplace_back(e, lp.upper[j]);
        forced.push_back(false);
    }
    std::optional<double> best;
    const std::size_t p = planes.size();
    std::vector<std::size_t> pick(n);
    // iterate over n-subsets
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == n)
        {
            for (std::size_t i = 0; i < p; ++i)
                if (forced[i] && std::find(pick.begin(), pick.end(), i) == pick.end())
                    return;
            std::vector<RVec> a;
            RVec b;
            for (auto i : pick)
            {
                a.push_back(planes[i].first);
                b.push_back(planes[i].second);
            }
            // skip singular systems
            ComplexMatrix cm(n, n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    cm(r, c) = a[r][c];
            if (std::abs(test::determinant(cm)) < 1e-9)
                return;
            const RVec x = test::solve_dense(a, b);
            if (lp.max_violation(x) > 1e-9)
                return;
            const double obj = lp.evaluate(x);
            if (!best || obj > *best)
                best = obj;
            return;
        }
        for (std::size_t i = start; i < p; ++i)
        {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

} // namespace

TEST_CASE("simplex trivial examples")
{
    LinearProgram lp;
    const auto x = lp.add_var(1.0, 0.0, kInf, "x");
    lp.add_constraint({{x, 1.0}}, Sense::LessEqual, 3.0);
    const auto r = simplex_solve(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.solution[0] == Catch::Approx(3.0));

    LinearProgram inf;
    const auto y = inf.add_var(1.0, 0.0, kInf);
    inf.add_constraint({{y, 1.0}}, Sense::LessEqual, -1.0);
    CHECK(simplex_solve(inf).status == LpStatus::Infeasible);

    LinearProgram unb;
    const auto u = unb.add_var(1.0, 0.0, kInf);
    const auto v = unb.add_var(0.0, 0.0, kInf);
    unb.add_constraint({{u, 1.0}, {v, -1.0}}, Sense::LessEqual, 1.0);
    CHECK(simplex_solve(unb).status == LpStatus::Unbounded);
}

TEST_CASE("simplex handles equality, ge rows, and nonzero lower bounds")
{
    // maximize x + 2y, x + y = 4, x - y >= -1, 1 <= x <= 3, 0 <= y <= 10
    LinearProgram lp;
    const auto x = lp.add_var(1.0, 1.0, 3.0);
    const auto y = lp.add_var(2.0, 0.0, 10.0);
    lp.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::Equal, 4.0);
    lp.add_constraint({{x, 1.0}, {y, -1.0}}, Sense::GreaterEqual, -1.0);
    const auto r = simplex_solve(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.solution[0] == Catch::Approx(1.5));
    CHECK(r.solution[1] == Catch::Approx(2.5));
    CHECK(r.objective == Catch::Approx(6.5));
    CHECK(lp.max_violation(r.solution) < 1e-9);
}

TEST_CASE("simplex matches vertex enumeration on random LPs")
{
    int infeasible = 0;
    for (std::uint64_t t = 0; t < 300; ++t)
    {
        auto s = RandomStream::derive(200, Purpose::Test, {t});
        LinearProgram lp;
        for (int j = 0; j < 5; ++j)
            lp.add_var(s.normal(), -1.0 + s.uniform(), 1.0 + 2.0 * s.uniform());
        for (int i = 0; i < 4; ++i)
        {
            std::vector<Term> terms;
            for (std::size_t j = 0; j < 5; ++j)
                if (s.uniform() < 0.8)
                    terms.push_back({j, s.normal()});
            const auto kind = s.uniform_int(4);
            const Sense sense = kind == 0 ? Sense::Equal : kind == 1 ? Sense::GreaterEqual : Sense::LessEqual;
            lp.add_constraint(terms, sense, s.normal());
        }
        const auto r = simplex_solve(lp);
        const auto oracle = vertex_enumeration(lp);
        if (!oracle)
        {
            ++infeasible;
            REQUIRE(r.status == LpStatus::Infeasible);
            continue;
        }
        REQUIRE(r.status == LpStatus::Optimal);
        REQUIRE(lp.max_violation(r.solution) <= 1e-9);
        REQUIRE(std::abs(r.objective - *oracle) <= 1e-7);
    }
    // the generator should exercise both outcomes
    CHECK(infeasible > 0);
    CHECK(infeasible < 300);
}

TEST_CASE("simplex survives a degenerate cycling-prone instance")
{
    // Beale's example (cycles under naive Dantzig pricing without anti-cycling)
    LinearProgram lp;
    const auto x1 = lp.add_var(0.75, 0.0, kInf);
    const auto x2 = lp.add_var(-150.0, 0.0, kInf);
    const auto x3 = lp.add_var(0.02, 0.0, kInf);
    const auto x4 = lp.add_var(-6.0, 0.0, kInf);
    lp.add_constraint({{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}}, Sense::LessEqual, 0.0);
    lp.add_constraint({{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}}, Sense::LessEqual, 0.0);
    lp.add_constraint({{x3, 1.0}}, Sense::LessEqual, 1.0);
    const auto r = simplex_solve(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == Catch::Approx(0.05));
}

TEST_CASE("LinearProgram validation")
{
    LinearProgram lp;
    lp.add_var(1.0, 0.0, 1.0);
    lp.add_constraint({{3, 1.0}}, Sense::LessEqual, 1.0);
    CHECK_THROWS_AS(lp.validate(), InvalidArgument);

    LinearProgram lb;
    lb.add_var(1.0, 2.0, 1.0);
    CHECK_THROWS_AS(lb.validate(), InvalidArgument);
}
