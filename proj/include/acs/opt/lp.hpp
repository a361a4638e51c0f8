// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "acs/numerics.hpp"
#include "acs/opt/tolerances.hpp"

namespace acs::opt
{

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense
{
    LessEqual,
    Equal,
    GreaterEqual
};

struct Term
{
    std::size_t var;
    double coeff;
};

struct Constraint
{
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
    std::string name;
};

// maximize objective . x  subject to constraints and lower <= x <= upper.
// Lower bounds must be finite; upper bounds may be kInf.
struct LinearProgram
{
    RVec objective;
    std::vector<Constraint> constraints;
    RVec lower;
    RVec upper;
    std::vector<std::string> names; // optional, used by the debug dump

    std::size_t num_vars() const { return objective.size(); }
    std::size_t add_var(double obj, double lo, double hi, std::string name = {});
    void add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name = {});
    void validate() const;

    // Largest violation of rows and bounds at x.
    double max_violation(std::span<const double> x) const;
    double evaluate(std::span<const double> x) const;
};

enum class LpStatus
{
    Optimal,
    Infeasible,
    Unbounded
};

const char *lp_status_name(LpStatus s);

struct LpResult
{
    LpStatus status = LpStatus::Infeasible;
    RVec solution;
    double objective = 0.0;
    std::size_t pivots = 0;
    bool used_bland = false;
};

// Bounded-variable primal simplex on a dense tableau, two phases.
// Dantzig pricing; switches to Bland's rule after 10*(rows+cols) degenerate
// pivots. Throws NumericalFailure past the pivot cap.
LpResult simplex_solve(const LinearProgram &lp, const Tolerances &tol = default_tolerances());

} // namespace acs::opt
