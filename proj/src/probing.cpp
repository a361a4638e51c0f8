// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/probing.hpp"

#include <algorithm>
#include <cmath>

namespace acs
{

PilotMatrix make_pilot(std::size_t t_dl, std::size_t m_prime, double p_dl, std::uint64_t seed)
{
    if (t_dl == 0 || t_dl > m_prime)
        throw InvalidArgument("make_pilot: need 1 <= T_dl <= M'");
    if (!(p_dl > 0.0) || !std::isfinite(p_dl))
        throw InvalidArgument("make_pilot: P_dl must be positive and finite");
    RandomStream stream(seed);
    ComplexMatrix g(t_dl, m_prime);
    for (auto &v : g.data())
        v = stream.complex_normal();
    PilotMatrix p;
    p.psi = scale(orthonormalize_rows(g), std::sqrt(p_dl));
    p.power = p_dl;
    return p;
}

void EffectiveChannelModel::validate(std::size_t m_prime) const
{
    if (positions.size() != variances.size())
        throw InvalidArgument("EffectiveChannelModel: one variance per position");
    for (std::size_t i = 0; i < positions.size(); ++i)
    {
        if (positions[i] >= m_prime)
            throw InvalidArgument("EffectiveChannelModel: position out of range");
        if (!(variances[i] >= 0.0) || !std::isfinite(variances[i]))
            throw InvalidArgument("EffectiveChannelModel: variances must be finite and >= 0");
    }
    if (!(n0 >= 0.0) || !std::isfinite(n0))
        throw InvalidArgument("EffectiveChannelModel: N0 must be finite and >= 0");
}

CVec dl_observe(const PilotMatrix &pilot, const SparsifyingPrecoder &precoder, std::span<const cx> h,
                double n0, RandomStream &stream)
{
    if (pilot.beams() != precoder.rows())
        throw InvalidArgument("dl_observe: pilot width must equal the number of selected beams");
    if (!(n0 >= 0.0))
        throw InvalidArgument("dl_observe: N0 must be >= 0");
    CVec y = matvec(pilot.psi, precoder.apply(h));
    const double sd = std::sqrt(n0);
    for (auto &v : y)
        v += sd * stream.complex_normal();
    return y;
}

CVec dl_observe(const PilotMatrix &pilot, const SparsifyingPrecoder &precoder, std::span<const cx> h,
                double n0, std::uint64_t seed)
{
    RandomStream stream(seed);
    return dl_observe(pilot, precoder, h, n0, stream);
}

CVec mmse_effective(std::span<const cx> y, const PilotMatrix &pilot, const EffectiveChannelModel &model)
{
    model.validate(pilot.beams());
    const std::size_t t = pilot.length(), s = model.positions.size();
    if (y.size() != t)
        throw InvalidArgument("mmse_effective: observation length must equal T_dl");
    CVec out(pilot.beams(), 0.0);
    if (s == 0)
        return out;

    // Psi_S Lambda_S Psi_S^H + N0 I, with Psi_S the support columns of Psi
    ComplexMatrix psl(t, s); // Psi_S Lambda_S
    for (std::size_t r = 0; r < t; ++r)
        for (std::size_t i = 0; i < s; ++i)
            psl(r, i) = pilot.psi(r, model.positions[i]) * model.variances[i];
    ComplexMatrix inner(t, t);
    for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < t; ++c)
        {
            cx acc = 0.0;
            for (std::size_t i = 0; i < s; ++i)
                acc += psl(r, i) * std::conj(pilot.psi(c, model.positions[i]));
            inner(r, c) = acc;
        }
    for (std::size_t r = 0; r < t; ++r)
        inner(r, r) += model.n0;
    inner = hermitian_part(inner);

    ComplexMatrix rhs(t, 1);
    for (std::size_t r = 0; r < t; ++r)
        rhs(r, 0) = y[r];
    const ComplexMatrix w = hpd_solve(inner, rhs);
    for (std::size_t i = 0; i < s; ++i)
    {
        cx acc = 0.0;
        for (std::size_t r = 0; r < t; ++r)
            acc += std::conj(psl(r, i)) * w(r, 0); // Lambda real, so (Psi_S Lambda)^H = Lambda Psi_S^H
        out[model.positions[i]] = acc;
    }
    return out;
}

CVec mmse_effective_covariance(std::span<const cx> y, const PilotMatrix &pilot, const ComplexMatrix &prior,
                               double n0)
{
    const std::size_t t = pilot.length(), mp = pilot.beams();
    if (prior.rows() != mp || prior.cols() != mp)
        throw InvalidArgument("mmse_effective_covariance: prior must be M' x M'");
    if (y.size() != t)
        throw InvalidArgument("mmse_effective_covariance: observation length must equal T_dl");
    if (!(n0 >= 0.0))
        throw InvalidArgument("mmse_effective_covariance: N0 must be >= 0");
    const ComplexMatrix r = hermitian_part(prior);
    const ComplexMatrix rpsi = matmul(r, adjoint(pilot.psi)); // R Psi^H
    ComplexMatrix inner = matmul(pilot.psi, rpsi);
    for (std::size_t i = 0; i < t; ++i)
        inner(i, i) += n0;
    ComplexMatrix rhs(t, 1);
    for (std::size_t i = 0; i < t; ++i)
        rhs(i, 0) = y[i];
    const ComplexMatrix w = hpd_solve(hermitian_part(inner), rhs);
    return matmul(rpsi, w).col(0);
}

double error_trace_oracle(const PilotMatrix &pilot, const ComplexMatrix &fs, const RVec &variances, double n0)
{
    const std::size_t s = fs.cols();
    if (s == 0)
        throw InvalidArgument("error_trace_oracle: support must be nonempty");
    if (fs.rows() != pilot.beams() || variances.size() != s)
        throw InvalidArgument("error_trace_oracle: dimension mismatch");
    if (!(n0 >= 0.0))
        throw InvalidArgument("error_trace_oracle: N0 must be >= 0");

    // A = Psi F_S Lambda^1/2, mu = eig(A^H A)
    ComplexMatrix a = matmul(pilot.psi, fs);
    for (std::size_t i = 0; i < s; ++i)
    {
        if (!(variances[i] >= 0.0))
            throw InvalidArgument("error_trace_oracle: variances must be >= 0");
        const double r = std::sqrt(variances[i]);
        for (std::size_t row = 0; row < a.rows(); ++row)
            a(row, i) *= r;
    }
    const auto eig = hermitian_eig_tridiagonal(hermitian_part(matmul_adj_left(a, a)));
    const double mu_max = std::max(0.0, eig.eigenvalues.back());
    double captured = 0.0;
    for (double mu : eig.eigenvalues)
    {
        // eigenvalues that are zero in exact arithmetic come out at round-off size
        mu = mu <= 1e-13 * mu_max ? 0.0 : mu;
        if (mu > 0.0)
            captured += mu / (n0 + mu);
    }
    return std::clamp(static_cast<double>(s) - captured, 0.0, static_cast<double>(s));
}

double error_trace_oracle(const PilotMatrix &pilot, const EffectiveChannelModel &model)
{
    model.validate(pilot.beams());
    ComplexMatrix fs(pilot.beams(), model.positions.size());
    for (std::size_t i = 0; i < model.positions.size(); ++i)
        fs(model.positions[i], i) = 1.0;
    return error_trace_oracle(pilot, fs, model.variances, model.n0);
}

} // namespace acs
