// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acs/opt/lp.hpp"

namespace acs::opt
{

// A linear program plus the variables that must take integer values.
struct MixedIntegerProgram
{
    LinearProgram lp;
    std::vector<std::size_t> integer_vars;

    void validate() const;
};

enum class MipStatus
{
    Optimal,
    Infeasible,
    Unbounded,
    NodeLimit // best incumbent returned with a nonzero gap
};

const char *mip_status_name(MipStatus s);

// Passed to the node observer after each node LP solve.
struct NodeInfo
{
    std::size_t index = 0;
    std::size_t depth = 0;
    LpStatus status = LpStatus::Infeasible;
    const RVec *solution = nullptr; // valid for Optimal only
    bool integral = false;          // integer variables all within tolerance
};

struct BnbOptions
{
    Tolerances tol = default_tolerances();
    // Called once with the root LP solution; may return a feasible point that
    // seeds the incumbent. Points that violate the MIP are ignored.
    std::function<std::optional<RVec>(const RVec &root)> heuristic;
    // Maps an LP bound to the largest objective value an integer-feasible
    // point can reach below it. Identity when unset.
    std::function<double(double)> bound_tightener;
    std::function<void(const NodeInfo &)> node_observer;
};

struct MipResult
{
    MipStatus status = MipStatus::Infeasible;
    RVec solution;
    double objective = 0.0;
    double best_bound = 0.0;
    double gap = 0.0;
    std::size_t node_count = 0;
    bool heuristic_used = false;
    double heuristic_objective = 0.0;
};

// Depth-first branch and bound, branching on the most fractional integer
// variable (lowest index on ties), up-branch first. Among incumbents with equal
// objective the lexicographically smallest integer part is kept.
MipResult branch_and_bound(const MixedIntegerProgram &mip, const BnbOptions &options = {});

// Plain-text dump in an LP-file-like layout:
//   maximize / subject to / bounds / integers / end
std::string dump_mip(const MixedIntegerProgram &mip);

} // namespace acs::opt
