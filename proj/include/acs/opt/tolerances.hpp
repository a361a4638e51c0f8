// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstddef>

namespace acs::opt
{

// Every threshold the solvers compare against.
struct Tolerances
{
    double nnls_kkt_rel = 1e-8;     // KKT tolerance relative to ||A^T b||_inf
    double lp_feasibility = 1e-9;   // primal feasibility of rows and bounds
    double lp_optimality = 1e-9;    // reduced-cost tolerance
    double lp_pivot = 1e-11;        // smallest accepted pivot magnitude
    double integrality = 1e-6;      // distance to the nearest integer
    double mip_absolute_gap = 1e-6; // optimality gap for pruning
    std::size_t bnb_node_limit = 1000000;
};

inline const Tolerances &default_tolerances()
{
    static const Tolerances t{};
    return t;
}

} // namespace acs::opt
