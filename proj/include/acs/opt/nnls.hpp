// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstddef>

#include "acs/numerics.hpp"
#include "acs/opt/tolerances.hpp"

namespace acs::opt
{

struct NnlsResult
{
    RVec solution;
    double residual_norm = 0.0;
    std::size_t iterations = 0;
};

// Lawson-Hanson active-set solver for min ||A z - b|| subject to z >= 0.
// Throws NumericalFailure when the outer iteration cap (3 * columns) is hit.
NnlsResult nnls(const RealMatrix &a, std::span<const double> b, const Tolerances &tol = default_tolerances());

// Largest KKT violation of z for the problem above, in units of ||A^T b||_inf.
double nnls_kkt_violation(const RealMatrix &a, std::span<const double> b, std::span<const double> z);

} // namespace acs::opt
