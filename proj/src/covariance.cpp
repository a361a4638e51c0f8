// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace acs
{

using std::numbers::pi;

namespace
{

void shift_to_psd(ToeplitzCovariance &c)
{
    const double lo = hermitian_eig_tridiagonal(c.matrix()).eigenvalues.front();
    if (lo < 0.0)
        c.first_column[0] -= lo;
    c.first_column[0] = c.first_column[0].real();
}

} // namespace

ComplexMatrix sample_covariance(const ComplexMatrix &y, double sigma2)
{
    if (y.cols() < 1)
        throw InvalidArgument("sample_covariance: need at least one observation");
    if (!(sigma2 >= 0.0))
        throw InvalidArgument("sample_covariance: sigma2 must be nonnegative");
    const std::size_t m = y.rows(), n = y.cols();
    ComplexMatrix c(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j)
        {
            cx s = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                s += y(i, t) * std::conj(y(j, t));
            s /= static_cast<double>(n);
            c(i, j) = s;
            c(j, i) = std::conj(s);
        }
    for (std::size_t i = 0; i < m; ++i)
        c(i, i) = c(i, i).real() - sigma2;
    return c;
}

ProjectionResult project_toeplitz_psd(const ComplexMatrix &a, Band band, const ProjectionOptions &options)
{
    if (a.rows() != a.cols() || a.rows() == 0)
        throw InvalidArgument("project_toeplitz_psd: input must be square and nonempty");
    if (!is_hermitian(a))
        throw InvalidArgument("project_toeplitz_psd: input must be Hermitian");

    const std::size_t m = a.rows();
    const double scale = frobenius_norm(a);
    ProjectionResult out;
    out.covariance.band = band;
    if (scale == 0.0)
    {
        out.covariance.first_column.assign(m, 0.0);
        return out;
    }
    const double stop = options.rel_tol * scale;

    // The Toeplitz set is a subspace, so only the cone step carries a
    // Dykstra correction.
    ComplexMatrix x = a;
    ComplexMatrix q(m, m);
    CVec col;
    for (std::size_t it = 1;; ++it)
    {
        col = toeplitz_average(x);
        const ComplexMatrix y = toeplitz_from_column(col);
        ComplexMatrix shifted = add(y, q);
        ComplexMatrix next = psd_project(shifted);
        q = add(shifted, next, -1.0);
        const double change = frobenius_distance(next, x);
        x = std::move(next);
        out.iterations = it;
        out.last_change = change;
        if (change < stop)
            break;
        if (it >= options.max_iterations)
        {
            out.status = ProjectionStatus::IterationLimit;
            break;
        }
    }
    // x is PSD and within tolerance of the subspace; its Toeplitz part can be
    // indefinite at that level, which a diagonal shift removes
    out.covariance.first_column = toeplitz_average(x);
    shift_to_psd(out.covariance);
    return out;
}

RVec AsfEstimate::measure() const
{
    RVec g(weights.size());
    const double s = 1.0 / std::sqrt(static_cast<double>(antennas));
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = weights[i] * s;
    return g;
}

AsfEstimate estimate_asf(const ToeplitzCovariance &c_ul, const ArrayConfig &cfg, std::size_t grid_size,
                         const opt::Tolerances &tol)
{
    cfg.validate();
    const std::size_t m = cfg.antennas;
    if (c_ul.size() != m)
        throw InvalidArgument("estimate_asf: covariance size does not match the array");
    if (grid_size < m)
        throw InvalidArgument("estimate_asf: grid size must be at least M");

    AsfEstimate est;
    est.antennas = m;
    est.xi.resize(grid_size);
    est.theta.resize(grid_size);
    const double smax = std::sin(cfg.theta_max);
    for (std::size_t i = 0; i < grid_size; ++i)
    {
        est.xi[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid_size);
        est.theta[i] = std::asin(est.xi[i] * smax);
    }

    // rows 0..M-1 real parts, M..2M-1 imaginary parts
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    const double f = cfg.band_factor(Band::Uplink);
    RealMatrix g(2 * m, grid_size);
    for (std::size_t i = 0; i < grid_size; ++i)
        for (std::size_t r = 0; r < m; ++r)
        {
            const double ph = pi * f * static_cast<double>(r) * est.xi[i];
            g(r, i) = norm * std::cos(ph);
            g(m + r, i) = norm * std::sin(ph);
        }
    RVec b(2 * m);
    for (std::size_t r = 0; r < m; ++r)
    {
        b[r] = c_ul.first_column[r].real();
        b[m + r] = c_ul.first_column[r].imag();
    }
    const auto sol = opt::nnls(g, b, tol);
    est.weights = sol.solution;
    est.residual_norm = sol.residual_norm;
    return est;
}

CVec resample_measure(const AsfEstimate &est, const ArrayConfig &cfg, Band band)
{
    if (cfg.antennas != est.antennas)
        throw InvalidArgument("resample_measure: antenna count mismatch");
    const RVec gamma = est.measure();
    const double f = cfg.band_factor(band);
    CVec c(est.antennas);
    for (std::size_t r = 0; r < est.antennas; ++r)
    {
        cx s = 0.0;
        for (std::size_t i = 0; i < gamma.size(); ++i)
            if (gamma[i] != 0.0)
                s += gamma[i] * std::polar(1.0, pi * f * static_cast<double>(r) * est.xi[i]);
        c[r] = s;
    }
    c[0] = c[0].real();
    return c;
}

ToeplitzCovariance extrapolate_dl(const AsfEstimate &est, const ArrayConfig &cfg)
{
    ToeplitzCovariance out{resample_measure(est, cfg, Band::Downlink), Band::Downlink};
    shift_to_psd(out);
    return out;
}

RVec circulant_eigenvalues(const ToeplitzCovariance &c)
{
    const std::size_t m = c.size();
    const double md = static_cast<double>(m);
    RVec lambda(m);
    for (std::size_t k = 0; k < m; ++k)
    {
        // d = 0 term plus d and -d together: 2 Re((M - d) c_d w^d)
        double s = md * c.first_column.front().real();
        for (std::size_t d = 1; d < m; ++d)
        {
            const double ph = 2.0 * pi * static_cast<double>((k * d) % m) / md;
            s += 2.0 * (md - static_cast<double>(d)) * (c.first_column[d] * std::polar(1.0, ph)).real();
        }
        lambda[k] = std::max(s / md, 0.0);
    }
    return lambda;
}

std::string covariance_to_csv(const ToeplitzCovariance &c)
{
    std::string out = "index,real,imag\n";
    char buf[96];
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, c.first_column[i].real(), c.first_column[i].imag());
        out += buf;
    }
    return out;
}

std::string spectrum_to_csv(const RVec &lambda)
{
    std::string out = "index,lambda\n";
    char buf[64];
    for (std::size_t i = 0; i < lambda.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, lambda[i]);
        out += buf;
    }
    return out;
}

} // namespace acs
