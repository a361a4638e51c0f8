// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/opt/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acs::opt
{

namespace
{

RVec gradient_descent_direction(const RealMatrix &a, std::span<const double> b, std::span<const double> z)
{
    // w = A^T (b - A z)
    RVec r = matvec(a, z);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = b[i] - r[i];
    RVec w(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            w[j] += a(i, j) * r[i];
    return w;
}

double inf_norm_atb(const RealMatrix &a, std::span<const double> b)
{
    RVec zero(a.cols(), 0.0);
    RVec w = gradient_descent_direction(a, b, zero);
    double m = 0.0;
    for (double v : w)
        m = std::max(m, std::abs(v));
    return m;
}

RVec solve_passive(const RealMatrix &a, std::span<const double> b, const std::vector<std::size_t> &passive)
{
    RealMatrix sub(a.rows(), passive.size());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < passive.size(); ++j)
            sub(i, j) = a(i, passive[j]);
    return least_squares(sub, b);
}

} // namespace

NnlsResult nnls(const RealMatrix &a, std::span<const double> b, const Tolerances &tol)
{
    const std::size_t n = a.cols();
    if (n < 1)
        throw InvalidArgument("nnls: matrix needs at least one column");
    if (b.size() != a.rows())
        throw InvalidArgument("nnls: rhs length mismatch");

    NnlsResult out;
    out.solution.assign(n, 0.0);
    const double scale = inf_norm_atb(a, b);
    if (scale == 0.0)
    {
        out.residual_norm = norm2(b);
        return out;
    }
    // an order of magnitude inside the KKT contract
    const double kkt = 0.1 * tol.nnls_kkt_rel * scale;

    RVec &z = out.solution;
    std::vector<bool> in_passive(n, false);
    std::vector<bool> excluded(n, false); // rejected since z last changed
    const std::size_t max_outer = 3 * n + 10;

    for (;;)
    {
        RVec w = gradient_descent_direction(a, b, z);
        std::size_t t = n;
        double best = kkt;
        for (std::size_t j = 0; j < n; ++j)
            if (!in_passive[j] && !excluded[j] && w[j] > best)
            {
                best = w[j];
                t = j;
            }
        if (t == n)
            break;
        if (++out.iterations > max_outer)
            throw NumericalFailure("nnls: iteration cap exceeded");
        in_passive[t] = true;

        for (std::size_t inner = 0;; ++inner)
        {
            if (inner > n + 1)
                throw NumericalFailure("nnls: inner loop failed to terminate");
            std::vector<std::size_t> passive;
            for (std::size_t j = 0; j < n; ++j)
                if (in_passive[j])
                    passive.push_back(j);
            RVec s;
            bool solved = true;
            try
            {
                s = solve_passive(a, b, passive);
            }
            catch (const NumericalFailure &)
            {
                solved = false;
            }
            if (inner == 0)
            {
                // a column that is dependent on the passive set, or whose
                // unconstrained coefficient comes out non-positive, cannot help
                const auto pos = std::find(passive.begin(), passive.end(), t) - passive.begin();
                if (!solved || s[static_cast<std::size_t>(pos)] <= 0.0)
                {
                    in_passive[t] = false;
                    excluded[t] = true;
                    break;
                }
            }
            else if (!solved)
                throw NumericalFailure("nnls: passive set became rank deficient");

            if (std::all_of(s.begin(), s.end(), [](double v) { return v > 0.0; }))
            {
                for (std::size_t j = 0; j < passive.size(); ++j)
                    z[passive[j]] = s[j];
                std::fill(excluded.begin(), excluded.end(), false);
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            std::size_t hit = passive.size();
            for (std::size_t j = 0; j < passive.size(); ++j)
                if (s[j] <= 0.0)
                {
                    const double zj = z[passive[j]];
                    const double ratio = zj / (zj - s[j]);
                    if (ratio < alpha)
                    {
                        alpha = ratio;
                        hit = j;
                    }
                }
            for (std::size_t j = 0; j < passive.size(); ++j)
            {
                double &zj = z[passive[j]];
                zj += alpha * (s[j] - zj);
                if (j == hit || zj <= 0.0)
                {
                    zj = 0.0;
                    in_passive[passive[j]] = false;
                }
            }
            std::fill(excluded.begin(), excluded.end(), false);
        }
    }
    RVec r = matvec(a, z);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= b[i];
    out.residual_norm = norm2(r);
    return out;
}

double nnls_kkt_violation(const RealMatrix &a, std::span<const double> b, std::span<const double> z)
{
    const double scale = inf_norm_atb(a, b);
    RVec w = gradient_descent_direction(a, b, z); // -gradient
    double worst = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j)
    {
        if (z[j] < 0.0)
            worst = std::max(worst, -z[j]);
        const double g = -w[j];
        if (g < 0.0)
            worst = std::max(worst, -g);
        if (z[j] > 0.0)
            worst = std::max(worst, std::abs(g));
    }
    return scale > 0 ? worst / scale : worst;
}

} // namespace acs::opt
