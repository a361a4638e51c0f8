// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/opt/lp.hpp"

#include <algorithm>
#include <cmath>

namespace acs::opt
{

std::size_t LinearProgram::add_var(double obj, double lo, double hi, std::string name)
{
    objective.push_back(obj);
    lower.push_back(lo);
    upper.push_back(hi);
    names.push_back(std::move(name));
    return objective.size() - 1;
}

void LinearProgram::add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name)
{
    constraints.push_back({std::move(terms), sense, rhs, std::move(name)});
}

void LinearProgram::validate() const
{
    const std::size_t n = num_vars();
    if (lower.size() != n || upper.size() != n)
        throw InvalidArgument("LinearProgram: bound vectors do not match variable count");
    for (std::size_t j = 0; j < n; ++j)
    {
        if (!std::isfinite(lower[j]))
            throw InvalidArgument("LinearProgram: lower bounds must be finite");
        if (!(lower[j] <= upper[j]))
            throw InvalidArgument("LinearProgram: lower bound exceeds upper bound");
    }
    for (const auto &c : constraints)
        for (const auto &t : c.terms)
            if (t.var >= n)
                throw InvalidArgument("LinearProgram: constraint references unknown variable");
}

double LinearProgram::max_violation(std::span<const double> x) const
{
    double worst = 0.0;
    for (std::size_t j = 0; j < num_vars(); ++j)
    {
        worst = std::max(worst, lower[j] - x[j]);
        worst = std::max(worst, x[j] - upper[j]);
    }
    for (const auto &c : constraints)
    {
        double lhs = 0.0;
        for (const auto &t : c.terms)
            lhs += t.coeff * x[t.var];
        const double d = lhs - c.rhs;
        if (c.sense != Sense::GreaterEqual)
            worst = std::max(worst, d);
        if (c.sense != Sense::LessEqual)
            worst = std::max(worst, -d);
    }
    return worst;
}

double LinearProgram::evaluate(std::span<const double> x) const
{
    double s = 0.0;
    for (std::size_t j = 0; j < num_vars(); ++j)
        s += objective[j] * x[j];
    return s;
}

const char *lp_status_name(LpStatus s)
{
    switch (s)
    {
    case LpStatus::Optimal:
        return "optimal";
    case LpStatus::Infeasible:
        return "infeasible";
    case LpStatus::Unbounded:
        return "unbounded";
    }
    return "?";
}

namespace
{

enum class VarState : unsigned char
{
    Basic,
    AtLower,
    AtUpper
};

class Tableau
{
public:
    Tableau(std::size_t rows, std::size_t cols)
        : m_(rows), n_(cols), t_(rows * cols, 0.0), d_(cols, 0.0), beta_(rows, 0.0),
          basis_(rows, 0), state_(cols, VarState::AtLower), ub_(cols, kInf) {}

    double &at(std::size_t r, std::size_t c) { return t_[r * n_ + c]; }
    double at(std::size_t r, std::size_t c) const { return t_[r * n_ + c]; }

    std::size_t m_, n_;
    std::vector<double> t_;
    RVec d_;    // reduced costs of the current phase (maximization)
    RVec beta_; // values of basic variables
    std::vector<std::size_t> basis_;
    std::vector<VarState> state_;
    RVec ub_; // shifted upper bounds, lower bound is 0 for every column

    double value(std::size_t j) const
    {
        return state_[j] == VarState::AtUpper ? ub_[j] : 0.0;
    }

    void price(const RVec &cost)
    {
        for (std::size_t j = 0; j < n_; ++j)
        {
            double s = cost[j];
            for (std::size_t i = 0; i < m_; ++i)
                s -= cost[basis_[i]] * at(i, j);
            d_[j] = s;
        }
    }

    void pivot(std::size_t r, std::size_t j)
    {
        const double inv = 1.0 / at(r, j);
        double *row_r = &t_[r * n_];
        for (std::size_t c = 0; c < n_; ++c)
            row_r[c] *= inv;
        row_r[j] = 1.0;
        for (std::size_t i = 0; i < m_; ++i)
        {
            if (i == r)
                continue;
            const double f = at(i, j);
            if (f == 0.0)
                continue;
            double *row_i = &t_[i * n_];
            for (std::size_t c = 0; c < n_; ++c)
                row_i[c] -= f * row_r[c];
            row_i[j] = 0.0;
        }
        const double f = d_[j];
        if (f != 0.0)
        {
            for (std::size_t c = 0; c < n_; ++c)
                d_[c] -= f * row_r[c];
            d_[j] = 0.0;
        }
    }
};

enum class PhaseOutcome
{
    Optimal,
    Unbounded
};

struct PhaseState
{
    std::size_t pivots = 0;
    std::size_t degenerate = 0;
    bool bland = false;
};

PhaseOutcome run_phase(Tableau &tab, const std::vector<bool> &may_enter, const Tolerances &tol, PhaseState &ps)
{
    const std::size_t m = tab.m_, n = tab.n_;
    const std::size_t bland_after = 10 * (m + n);
    const std::size_t pivot_cap = 200 * (m + n) + 1000;

    for (;;)
    {
        if (ps.pivots > pivot_cap)
            throw NumericalFailure("simplex: pivot cap exceeded");
        if (!ps.bland && ps.degenerate > bland_after)
            ps.bland = true;

        // pricing
        std::size_t enter = n;
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j)
        {
            if (!may_enter[j] || tab.state_[j] == VarState::Basic || tab.ub_[j] <= 0.0)
                continue;
            const double dj = tab.d_[j];
            double gain = 0.0;
            if (tab.state_[j] == VarState::AtLower && dj > tol.lp_optimality)
                gain = dj;
            else if (tab.state_[j] == VarState::AtUpper && dj < -tol.lp_optimality)
                gain = -dj;
            if (gain <= 0.0)
                continue;
            if (ps.bland)
            {
                enter = j;
                break;
            }
            if (gain > best)
            {
                best = gain;
                enter = j;
            }
        }
        if (enter == n)
            return PhaseOutcome::Optimal;

        const double dir = tab.state_[enter] == VarState::AtLower ? 1.0 : -1.0;

        // ratio test
        double step = tab.ub_[enter]; // bound flip limit
        std::size_t leave_row = m;
        double leave_alpha = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            const double alpha = dir * tab.at(i, enter);
            double lim;
            if (alpha > tol.lp_pivot)
                lim = std::max(tab.beta_[i], 0.0) / alpha;
            else if (alpha < -tol.lp_pivot && std::isfinite(tab.ub_[tab.basis_[i]]))
                lim = std::max(tab.ub_[tab.basis_[i]] - tab.beta_[i], 0.0) / -alpha;
            else
                continue;
            bool take = false;
            if (lim < step - 1e-12)
                take = true;
            else if (lim <= step + 1e-12 && leave_row != m)
            {
                if (ps.bland)
                    take = tab.basis_[i] < tab.basis_[leave_row];
                else
                    take = std::abs(alpha) > std::abs(leave_alpha);
            }
            else if (lim <= step + 1e-12 && leave_row == m && lim < step)
                take = true;
            if (take)
            {
                step = lim;
                leave_row = i;
                leave_alpha = alpha;
            }
        }
        if (!std::isfinite(step))
            return PhaseOutcome::Unbounded;

        ++ps.pivots;
        if (step <= 1e-12)
            ++ps.degenerate;

        for (std::size_t i = 0; i < m; ++i)
            tab.beta_[i] -= dir * tab.at(i, enter) * step;

        if (leave_row == m)
        {
            // entering variable runs into its own opposite bound
            tab.state_[enter] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
            continue;
        }

        const std::size_t leaving = tab.basis_[leave_row];
        const double entering_value = tab.value(enter) + dir * step;
        tab.state_[leaving] = leave_alpha > 0 ? VarState::AtLower : VarState::AtUpper;
        tab.basis_[leave_row] = enter;
        tab.state_[enter] = VarState::Basic;
        tab.pivot(leave_row, enter);
        tab.beta_[leave_row] = entering_value;
    }
}

} // namespace

LpResult simplex_solve(const LinearProgram &lp, const Tolerances &tol)
{
    lp.validate();
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.constraints.size();

    // shifted rows with non-negative right-hand sides
    struct Row
    {
        RVec coeff;
        Sense sense;
        double rhs;
    };
    std::vector<Row> rows;
    rows.reserve(m);
    std::size_t slack_count = 0, art_count = 0;
    double rhs_scale = 1.0;
    for (const auto &c : lp.constraints)
    {
        Row r{RVec(n, 0.0), c.sense, c.rhs};
        for (const auto &t : c.terms)
        {
            r.coeff[t.var] += t.coeff;
            r.rhs -= t.coeff * lp.lower[t.var];
        }
        if (r.rhs < 0.0)
        {
            for (auto &v : r.coeff)
                v = -v;
            r.rhs = -r.rhs;
            if (r.sense == Sense::LessEqual)
                r.sense = Sense::GreaterEqual;
            else if (r.sense == Sense::GreaterEqual)
                r.sense = Sense::LessEqual;
        }
        rhs_scale = std::max(rhs_scale, r.rhs);
        if (r.sense != Sense::Equal)
            ++slack_count;
        if (r.sense != Sense::LessEqual)
            ++art_count;
        rows.push_back(std::move(r));
    }

    const std::size_t cols = n + slack_count + art_count;
    Tableau tab(m, cols);
    std::vector<bool> is_artificial(cols, false);
    for (std::size_t j = 0; j < n; ++j)
        tab.ub_[j] = lp.upper[j] - lp.lower[j];

    std::size_t next_slack = n, next_art = n + slack_count;
    for (std::size_t i = 0; i < m; ++i)
    {
        const Row &r = rows[i];
        for (std::size_t j = 0; j < n; ++j)
            tab.at(i, j) = r.coeff[j];
        tab.beta_[i] = r.rhs;
        if (r.sense == Sense::LessEqual)
        {
            tab.at(i, next_slack) = 1.0;
            tab.basis_[i] = next_slack;
            tab.state_[next_slack] = VarState::Basic;
            ++next_slack;
        }
        else
        {
            if (r.sense == Sense::GreaterEqual)
                tab.at(i, next_slack++) = -1.0;
            tab.at(i, next_art) = 1.0;
            tab.basis_[i] = next_art;
            tab.state_[next_art] = VarState::Basic;
            is_artificial[next_art] = true;
            ++next_art;
        }
    }

    LpResult result;
    PhaseState ps;

    if (art_count > 0)
    {
        RVec cost(cols, 0.0);
        for (std::size_t j = 0; j < cols; ++j)
            if (is_artificial[j])
                cost[j] = -1.0;
        tab.price(cost);
        std::vector<bool> may_enter(cols, true);
        run_phase(tab, may_enter, tol, ps);
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (is_artificial[tab.basis_[i]])
                infeas += std::max(tab.beta_[i], 0.0);
        if (infeas > tol.lp_feasibility * rhs_scale)
        {
            result.status = LpStatus::Infeasible;
            result.pivots = ps.pivots;
            return result;
        }
        // drive zero-level artificials out of the basis where possible
        for (std::size_t i = 0; i < m; ++i)
        {
            if (!is_artificial[tab.basis_[i]])
                continue;
            std::size_t best_col = cols;
            double best_mag = 1e-9;
            for (std::size_t j = 0; j < cols; ++j)
                if (!is_artificial[j] && tab.state_[j] != VarState::Basic && std::abs(tab.at(i, j)) > best_mag)
                {
                    best_mag = std::abs(tab.at(i, j));
                    best_col = j;
                }
            if (best_col == cols)
                continue; // redundant row
            const std::size_t leaving = tab.basis_[i];
            const double v = tab.value(best_col);
            tab.state_[leaving] = VarState::AtLower;
            tab.basis_[i] = best_col;
            tab.state_[best_col] = VarState::Basic;
            tab.pivot(i, best_col);
            tab.beta_[i] = v;
        }
        for (std::size_t j = 0; j < cols; ++j)
            if (is_artificial[j])
                tab.ub_[j] = 0.0;
    }

    RVec cost(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        cost[j] = lp.objective[j];
    tab.price(cost);
    std::vector<bool> may_enter(cols, true);
    for (std::size_t j = 0; j < cols; ++j)
        if (is_artificial[j])
            may_enter[j] = false;
    const PhaseOutcome outcome = run_phase(tab, may_enter, tol, ps);
    result.pivots = ps.pivots;
    result.used_bland = ps.bland;
    if (outcome == PhaseOutcome::Unbounded)
    {
        result.status = LpStatus::Unbounded;
        return result;
    }

    RVec shifted(cols);
    for (std::size_t j = 0; j < cols; ++j)
        shifted[j] = tab.value(j);
    for (std::size_t i = 0; i < m; ++i)
        shifted[tab.basis_[i]] = tab.beta_[i];
    result.solution.resize(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        double x = lp.lower[j] + shifted[j];
        // snap round-off back inside the box
        x = std::clamp(x, lp.lower[j], lp.upper[j]);
        result.solution[j] = x;
    }
    result.objective = lp.evaluate(result.solution);
    result.status = LpStatus::Optimal;
    return result;
}

} // namespace acs::opt
