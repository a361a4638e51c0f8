// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/opt/milp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace acs::opt
{

void MixedIntegerProgram::validate() const
{
    lp.validate();
    for (auto j : integer_vars)
    {
        if (j >= lp.num_vars())
            throw InvalidArgument("MixedIntegerProgram: integer index out of range");
        if (!std::isfinite(lp.upper[j]))
            throw InvalidArgument("MixedIntegerProgram: integer variables need finite bounds");
    }
}

const char *mip_status_name(MipStatus s)
{
    switch (s)
    {
    case MipStatus::Optimal:
        return "optimal";
    case MipStatus::Infeasible:
        return "infeasible";
    case MipStatus::Unbounded:
        return "unbounded";
    case MipStatus::NodeLimit:
        return "node-limit";
    }
    return "?";
}

namespace
{

struct Node
{
    RVec lower;
    RVec upper;
    std::size_t depth = 0;
    double parent_bound = kInf;
};

bool lex_less(const RVec &a, const RVec &b, const std::vector<std::size_t> &ints)
{
    for (auto j : ints)
    {
        const double x = std::round(a[j]), y = std::round(b[j]);
        if (x != y)
            return x < y;
    }
    return false;
}

} // namespace

MipResult branch_and_bound(const MixedIntegerProgram &mip, const BnbOptions &options)
{
    mip.validate();
    const Tolerances &tol = options.tol;
    auto tighten = [&](double bound) { return options.bound_tightener ? options.bound_tightener(bound) : bound; };
    auto is_integral = [&](const RVec &x) {
        for (auto j : mip.integer_vars)
            if (std::abs(x[j] - std::round(x[j])) > tol.integrality)
                return false;
        return true;
    };

    MipResult result;
    bool have_incumbent = false;
    auto offer = [&](RVec x) {
        for (auto j : mip.integer_vars)
            x[j] = std::round(x[j]);
        if (mip.lp.max_violation(x) > 1e-7)
            return false;
        const double obj = mip.lp.evaluate(x);
        const bool better = !have_incumbent || obj > result.objective + 1e-9 ||
                            (obj >= result.objective - 1e-9 && lex_less(x, result.solution, mip.integer_vars));
        if (better)
        {
            result.solution = std::move(x);
            result.objective = obj;
            have_incumbent = true;
        }
        return better;
    };

    std::vector<Node> stack;
    stack.push_back({mip.lp.lower, mip.lp.upper, 0, kInf});
    LinearProgram node_lp = mip.lp;
    double open_bound = -kInf; // largest bound among nodes dropped at the limit
    bool root = true;

    while (!stack.empty())
    {
        if (result.node_count >= tol.bnb_node_limit)
        {
            for (const auto &n : stack)
                open_bound = std::max(open_bound, n.parent_bound);
            break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        if (have_incumbent && tighten(node.parent_bound) <= result.objective + tol.mip_absolute_gap)
            continue;

        node_lp.lower = node.lower;
        node_lp.upper = node.upper;
        const LpResult lp = simplex_solve(node_lp, tol);
        const std::size_t index = result.node_count++;

        NodeInfo info{index, node.depth, lp.status, nullptr, false};
        if (lp.status == LpStatus::Optimal)
        {
            info.solution = &lp.solution;
            info.integral = is_integral(lp.solution);
        }
        if (options.node_observer)
            options.node_observer(info);

        if (lp.status == LpStatus::Unbounded)
        {
            if (root)
            {
                result.status = MipStatus::Unbounded;
                return result;
            }
            continue;
        }
        if (lp.status == LpStatus::Infeasible)
        {
            root = false;
            continue;
        }
        if (root)
        {
            result.best_bound = lp.objective;
            if (options.heuristic)
                if (auto guess = options.heuristic(lp.solution))
                {
                    result.heuristic_used = offer(*guess);
                    if (result.heuristic_used)
                        result.heuristic_objective = result.objective;
                }
            root = false;
        }

        const double bound = tighten(lp.objective);
        if (have_incumbent && bound <= result.objective + tol.mip_absolute_gap && !info.integral)
            continue;

        if (info.integral)
        {
            offer(lp.solution);
            continue;
        }

        // most fractional, lowest index on ties
        std::size_t branch_var = mip.lp.num_vars();
        double best_frac = -1.0;
        for (auto j : mip.integer_vars)
        {
            const double v = lp.solution[j];
            const double frac = std::abs(v - std::round(v));
            if (frac <= tol.integrality)
                continue;
            const double score = std::min(v - std::floor(v), std::ceil(v) - v);
            if (score > best_frac + 1e-12 || (std::abs(score - best_frac) <= 1e-12 && j < branch_var))
            {
                best_frac = score;
                branch_var = j;
            }
        }
        const double v = lp.solution[branch_var];
        Node down{node.lower, node.upper, node.depth + 1, lp.objective};
        down.upper[branch_var] = std::floor(v);
        Node up{std::move(node.lower), std::move(node.upper), node.depth + 1, lp.objective};
        up.lower[branch_var] = std::ceil(v);
        stack.push_back(std::move(down));
        stack.push_back(std::move(up));
    }

    if (!have_incumbent)
    {
        result.status = stack.empty() ? MipStatus::Infeasible : MipStatus::NodeLimit;
        result.gap = kInf;
        return result;
    }
    if (!stack.empty())
    {
        result.status = MipStatus::NodeLimit;
        result.gap = std::max(0.0, tighten(open_bound) - result.objective);
    }
    else
    {
        result.status = MipStatus::Optimal;
        result.gap = 0.0;
    }
    return result;
}

std::string dump_mip(const MixedIntegerProgram &mip)
{
    const auto &lp = mip.lp;
    auto name = [&](std::size_t j) {
        if (j < lp.names.size() && !lp.names[j].empty())
            return lp.names[j];
        return "v" + std::to_string(j);
    };
    std::ostringstream os;
    os.precision(17);
    os << "maximize\n obj:";
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        if (lp.objective[j] != 0.0)
            os << ' ' << (lp.objective[j] < 0 ? "- " : "+ ") << std::abs(lp.objective[j]) << ' ' << name(j);
    os << "\nsubject to\n";
    for (std::size_t i = 0; i < lp.constraints.size(); ++i)
    {
        const auto &c = lp.constraints[i];
        os << ' ' << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ':';
        for (const auto &t : c.terms)
            os << ' ' << (t.coeff < 0 ? "- " : "+ ") << std::abs(t.coeff) << ' ' << name(t.var);
        os << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::Equal ? " = " : " >= ") << c.rhs << '\n';
    }
    os << "bounds\n";
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
    {
        os << ' ' << lp.lower[j] << " <= " << name(j) << " <= ";
        if (std::isfinite(lp.upper[j]))
            os << lp.upper[j];
        else
            os << "inf";
        os << '\n';
    }
    os << "integers\n";
    for (auto j : mip.integer_vars)
        os << ' ' << name(j);
    os << "\nend\n";
    return os.str();
}

} // namespace acs::opt
