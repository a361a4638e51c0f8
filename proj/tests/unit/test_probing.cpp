// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <cmath>

#include "acs/probing.hpp"
#include "acs/rng.hpp"

using namespace acs;

namespace
{

double gram_defect(const PilotMatrix &p)
{
    const auto g = matmul(p.psi, adjoint(p.psi));
    return frobenius_distance(g, scale(ComplexMatrix::identity(p.length()), p.power)) / p.power;
}

EffectiveChannelModel first_positions(std::size_t s, double variance, double n0)
{
    EffectiveChannelModel m;
    for (std::size_t i = 0; i < s; ++i)
    {
        m.positions.push_back(i);
        m.variances.push_back(variance);
    }
    m.n0 = n0;
    return m;
}

// Empirical trace of the whitened error covariance of mmse_effective.
double empirical_trace(const PilotMatrix &pilot, const EffectiveChannelModel &model, std::size_t draws,
                       std::uint64_t seed)
{
    const std::size_t mp = pilot.beams();
    const SparsifyingPrecoder identity_beams = [&] {
        std::vector<std::size_t> all(mp);
        for (std::size_t i = 0; i < mp; ++i)
            all[i] = i;
        return SparsifyingPrecoder(all, mp);
    }();
    const auto f = dft_matrix(mp);
    double total = 0.0;
    RandomStream s(seed);
    for (std::size_t d = 0; d < draws; ++d)
    {
        // effective channel with the prior, mapped back to the antenna domain
        CVec heff(mp, 0.0);
        for (std::size_t i = 0; i < model.positions.size(); ++i)
            heff[model.positions[i]] = std::sqrt(model.variances[i]) * s.complex_normal();
        const CVec h = matvec(f, heff);
        const CVec y = dl_observe(pilot, identity_beams, h, model.n0, s);
        const CVec est = mmse_effective(y, pilot, model);
        for (std::size_t i = 0; i < model.positions.size(); ++i)
            total += std::norm(est[model.positions[i]] - heff[model.positions[i]]) / model.variances[i];
    }
    return total / static_cast<double>(draws);
}

// Relative residual of v after projection onto the column span of g.
double range_residual(const ComplexMatrix &g, const CVec &v)
{
    const auto gram = matmul_adj_left(g, g);
    ComplexMatrix rhs(g.cols(), 1);
    for (std::size_t c = 0; c < g.cols(); ++c)
        rhs(c, 0) = dot(g.col(c), v);
    const auto coef = hpd_solve(gram, rhs);
    const auto fit = matvec(g, coef.col(0));
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        r += std::norm(v[i] - fit[i]);
    return std::sqrt(r) / norm2(v);
}

} // namespace

TEST_CASE("make_pilot rows are orthonormal and scaled")
{
    const auto p = make_pilot(6, 6, 2.0, 1);
    CHECK(gram_defect(p) < 1e-10);
    // square: sqrt(P) times a unitary, so columns are orthogonal as well
    const auto gc = matmul_adj_left(p.psi, p.psi);
    CHECK(frobenius_distance(gc, scale(ComplexMatrix::identity(6), 2.0)) < 1e-10);

    const auto a = make_pilot(5, 20, 3.0, 7);
    const auto b = make_pilot(5, 20, 3.0, 8);
    CHECK(gram_defect(a) < 1e-10);
    CHECK(gram_defect(b) < 1e-10);
    CHECK(std::abs(trace(matmul(a.psi, adjoint(a.psi))).real() - 15.0) < 1e-9);
    CHECK(frobenius_distance(a.psi, b.psi) > 0.1);
    CHECK(frobenius_distance(a.psi, make_pilot(5, 20, 3.0, 7).psi) == 0.0);

    CHECK_THROWS_AS(make_pilot(5, 4, 1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(make_pilot(0, 4, 1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(make_pilot(2, 4, 0.0, 1), InvalidArgument);
}

TEST_CASE("dl_observe model")
{
    const std::size_t m = 8;
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i)
        all[i] = i;
    const SparsifyingPrecoder b(all, m);
    PilotMatrix p;
    p.power = 4.0;
    p.psi = scale(ComplexMatrix::identity(m), 2.0);

    RandomStream s(3);
    CVec h(m);
    for (auto &v : h)
        v = s.complex_normal();
    const auto y = dl_observe(p, b, h, 0.0, 5);
    const auto fh = matvec(adjoint(dft_matrix(m)), h);
    for (std::size_t i = 0; i < m; ++i)
        CHECK(std::abs(y[i] - 2.0 * fh[i]) < 1e-12);

    CHECK(dl_observe(p, b, h, 0.3, 9) == dl_observe(p, b, h, 0.3, 9));

    // noise only
    const auto big = make_pilot(1, m, 1.0, 2);
    double var = 0.0;
    RandomStream ns(4);
    const CVec zero(m, 0.0);
    for (int i = 0; i < 20000; ++i)
        var += std::norm(dl_observe(big, b, zero, 0.5, ns)[0]);
    CHECK(var / 20000.0 == Catch::Approx(0.5).epsilon(0.03));

    CHECK_THROWS_AS(dl_observe(make_pilot(2, 4, 1.0, 1), b, h, 0.1, 1), InvalidArgument);
}

TEST_CASE("mmse_effective closed forms")
{
    PilotMatrix p;
    p.power = 1.0;
    p.psi = ComplexMatrix(1, 1, cx(0.6, 0.8));
    EffectiveChannelModel model;
    model.positions = {0};
    model.variances = {2.0};
    model.n0 = 0.5;
    const CVec y{cx(1.0, -2.0)};
    const cx expected = 2.0 * std::conj(cx(0.6, 0.8)) * y[0] / (1.0 * 2.0 + 0.5);
    CHECK(std::abs(mmse_effective(y, p, model)[0] - expected) < 1e-14);

    // noise dominates: estimate tends to the prior mean
    const auto pil = make_pilot(4, 10, 1.0, 3);
    auto m2 = first_positions(3, 1.0, 1e12);
    const CVec y4{1.0, 2.0, -1.0, cx(0.0, 3.0)};
    for (const auto &v : mmse_effective(y4, pil, m2))
        CHECK(std::abs(v) < 1e-10);

    // off-support entries are exactly zero
    m2 = first_positions(0, 1.0, 0.1);
    m2.positions = {2, 7};
    m2.variances = {1.0, 0.5};
    const auto est = mmse_effective(y4, pil, m2);
    for (std::size_t i = 0; i < est.size(); ++i)
        if (i != 2 && i != 7)
            CHECK(est[i] == cx(0.0));
    CHECK(est[2] != cx(0.0));

    // singular inner matrix
    auto sing = first_positions(1, 1.0, 0.0);
    CHECK_THROWS_AS(mmse_effective(y4, pil, sing), NumericalFailure);
    sing.positions = {10};
    CHECK_THROWS_AS(mmse_effective(y4, pil, sing), InvalidArgument);
}

TEST_CASE("covariance-prior MMSE agrees with the diagonal prior")
{
    const auto pil = make_pilot(4, 10, 2.0, 5);
    EffectiveChannelModel m;
    m.positions = {1, 4, 8};
    m.variances = {1.0, 0.3, 2.5};
    m.n0 = 0.2;
    ComplexMatrix prior(10, 10);
    for (std::size_t i = 0; i < 3; ++i)
        prior(m.positions[i], m.positions[i]) = m.variances[i];
    const CVec y{cx(0.5, 1.0), -2.0, cx(0.0, -0.7), 1.5};
    const auto a = mmse_effective(y, pil, m);
    const auto b = mmse_effective_covariance(y, pil, prior, m.n0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a[i] - b[i]) < 1e-12);

    // the estimate lies in the range of the prior
    RandomStream s(8);
    ComplexMatrix g(10, 2);
    for (auto &v : g.data())
        v = s.complex_normal();
    const auto low_rank = matmul(g, adjoint(g));
    const auto est = mmse_effective_covariance(y, pil, low_rank, 0.1);
    const auto coef = range_residual(g, est);
    CHECK(coef < 1e-10);

    CHECK_THROWS_AS(mmse_effective_covariance(y, pil, ComplexMatrix(9, 9), 1.0), InvalidArgument);
}

TEST_CASE("error trace oracle limits")
{
    const auto pil = make_pilot(8, 32, 1000.0, 21);
    const auto model = first_positions(8, 1.0, 1e9);
    CHECK(error_trace_oracle(pil, model) == Catch::Approx(8.0).epsilon(1e-4));

    double prev = -1.0;
    for (double n0 : {1e-6, 1e-4, 1e-2, 1.0, 1e2})
    {
        auto m = model;
        m.n0 = n0;
        const double v = error_trace_oracle(pil, m);
        CHECK(v >= 0.0);
        CHECK(v <= 8.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("stable estimation needs as many pilots as support entries")
{
    // T_dl = s: error trace proportional to N0
    const auto full = make_pilot(8, 32, 1000.0, 21);
    auto m = first_positions(8, 1.0, 1e-2);
    const double e2 = error_trace_oracle(full, m);
    m.n0 = 1e-3;
    const double e3 = error_trace_oracle(full, m);
    m.n0 = 1e-4;
    const double e4 = error_trace_oracle(full, m);
    CHECK(e2 / e3 == Catch::Approx(10.0).epsilon(0.15));
    CHECK(e3 / e4 == Catch::Approx(10.0).epsilon(0.15));

    // T_dl < s: floor at s - T_dl
    const auto short_pilot = make_pilot(6, 32, 1000.0, 22);
    m.n0 = 1e-8;
    CHECK(std::abs(error_trace_oracle(short_pilot, m) - 2.0) < 1e-3);
    m.n0 = 1e-12;
    CHECK(std::abs(error_trace_oracle(short_pilot, m) - 2.0) < 1e-6);
}

TEST_CASE("empirical MMSE error matches the oracle")
{
    const auto pil = make_pilot(6, 16, 10.0, 31);
    EffectiveChannelModel model;
    model.positions = {0, 3, 4, 9, 12};
    model.variances = {1.0, 0.5, 2.0, 0.8, 1.5};
    model.n0 = 1.0;
    const double oracle = error_trace_oracle(pil, model);
    const double emp = empirical_trace(pil, model, 20000, 77);
    CHECK(emp == Catch::Approx(oracle).epsilon(0.03));
}
