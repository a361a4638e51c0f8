// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "acs/numerics.hpp"
#include "acs/rng.hpp"
#include "oracles.hpp"

using namespace acs;
using Catch::Matchers::WithinAbs;

namespace
{

double unitary_defect(const ComplexMatrix &u)
{
    const ComplexMatrix g = matmul_adj_left(u, u);
    return frobenius_distance(g, ComplexMatrix::identity(u.cols()));
}

ComplexMatrix diag(const RVec &d)
{
    ComplexMatrix out(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        out(i, i) = d[i];
    return out;
}

} // namespace

TEST_CASE("dft_matrix small sizes")
{
    const auto f1 = dft_matrix(1);
    REQUIRE(f1.rows() == 1);
    CHECK_THAT(std::abs(f1(0, 0) - cx(1.0)), WithinAbs(0.0, 1e-15));

    const auto f2 = dft_matrix(2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2(0, 0) - r) < 1e-15);
    CHECK(std::abs(f2(0, 1) - r) < 1e-15);
    CHECK(std::abs(f2(1, 0) - r) < 1e-15);
    CHECK(std::abs(f2(1, 1) + r) < 1e-15);

    CHECK(unitary_defect(dft_matrix(8)) < 1e-12);
    CHECK_THROWS_AS(dft_matrix(0), InvalidArgument);
}

TEST_CASE("dft_matrix is unitary up to 256")
{
    for (std::size_t m : {3u, 16u, 64u, 127u, 256u})
        CHECK(unitary_defect(dft_matrix(m)) < 1e-12 * static_cast<double>(m));
}

TEST_CASE("hermitian_eig basic examples")
{
    const auto e1 = hermitian_eig(ComplexMatrix::identity(3));
    for (double v : e1.eigenvalues)
        CHECK_THAT(v, WithinAbs(1.0, 1e-14));

    const auto e2 = hermitian_eig(diag({3.0, -1.0}));
    CHECK_THAT(e2.eigenvalues[0], WithinAbs(-1.0, 1e-14));
    CHECK_THAT(e2.eigenvalues[1], WithinAbs(3.0, 1e-14));
    CHECK(std::abs(std::abs(e2.eigenvectors(1, 0)) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(e2.eigenvectors(0, 1)) - 1.0) < 1e-14);

    ComplexMatrix bad(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(bad), InvalidArgument);
}

TEST_CASE("hermitian_eig matches characteristic polynomial roots")
{
    RandomStream s(11);
    const auto a = test::random_hermitian(6, s);
    const auto eig = hermitian_eig(a);

    // det(A - t I) is real for Hermitian A; bracket sign changes on a fine grid
    // and bisect.
    auto charpoly = [&](double t) {
        ComplexMatrix b = a;
        for (std::size_t i = 0; i < 6; ++i)
            b(i, i) -= t;
        return test::determinant(b).real();
    };
    const double bound = frobenius_norm(a) + 1.0;
    RVec roots;
    const int steps = 200000;
    double prev_t = -bound, prev_v = charpoly(prev_t);
    for (int i = 1; i <= steps; ++i)
    {
        const double t = -bound + 2.0 * bound * i / steps;
        const double v = charpoly(t);
        if ((prev_v < 0) != (v < 0))
        {
            double lo = prev_t, hi = t, flo = prev_v;
            for (int k = 0; k < 80; ++k)
            {
                const double mid = 0.5 * (lo + hi);
                const double fm = charpoly(mid);
                if ((fm < 0) == (flo < 0))
                {
                    lo = mid;
                    flo = fm;
                }
                else
                    hi = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_v = v;
    }
    REQUIRE(roots.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK_THAT(eig.eigenvalues[i], WithinAbs(roots[i], 1e-9));
}

TEST_CASE("hermitian_eig invariants on random inputs")
{
    RandomStream s(12);
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u})
    {
        const auto a = test::random_hermitian(n, s);
        const auto eig = hermitian_eig(a);
        const double norm = frobenius_norm(a);
        CHECK(frobenius_distance(reconstruct(eig), a) <= 1e-9 * norm);
        CHECK(unitary_defect(eig.eigenvectors) <= 1e-9);
        CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
        double sum = 0.0;
        for (double v : eig.eigenvalues)
            sum += v;
        CHECK(std::abs(sum - trace(a).real()) <= 1e-9 * std::max(1.0, norm));
    }
}

TEST_CASE("psd_project examples and nearest-point property")
{
    const auto p = psd_project(diag({2.0, -1.0}));
    CHECK(frobenius_distance(p, diag({2.0, 0.0})) < 1e-14);

    RandomStream s(21);
    ComplexMatrix g(4, 4);
    for (auto &v : g.data())
        v = s.complex_normal();
    const auto psd = matmul(g, adjoint(g));
    CHECK(frobenius_distance(psd_project(psd), psd) < 1e-10 * frobenius_norm(psd));

    const auto a = test::random_hermitian(5, s);
    const auto proj = psd_project(a);
    CHECK(frobenius_distance(psd_project(proj), proj) < 1e-10);
    const double d = frobenius_distance(proj, a);
    for (int t = 0; t < 10000; ++t)
    {
        ComplexMatrix x(5, 2);
        for (auto &v : x.data())
            v = s.complex_normal();
        const auto cand = matmul(x, adjoint(x));
        REQUIRE(frobenius_distance(cand, a) >= d - 1e-12);
    }
}

TEST_CASE("toeplitz_average examples")
{
    const CVec col{2.0, cx(0.5, 0.25), cx(-0.1, 0.3)};
    const auto t = toeplitz_from_column(col);
    const auto back = toeplitz_average(t);
    for (std::size_t k = 0; k < col.size(); ++k)
        CHECK(std::abs(back[k] - col[k]) < 1e-15);

    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 0) = 2.0;
    a(1, 1) = 1.0;
    const auto c = toeplitz_average(a);
    CHECK(std::abs(c[0] - cx(1.0)) < 1e-15);
    CHECK(std::abs(c[1] - cx(1.0)) < 1e-15);

    // idempotent after expansion
    RandomStream s(31);
    const auto r = test::random_hermitian(6, s);
    const auto once = toeplitz_from_column(toeplitz_average(r));
    const auto twice = toeplitz_from_column(toeplitz_average(once));
    CHECK(frobenius_distance(once, twice) < 1e-14);
}

TEST_CASE("toeplitz_average is the least-squares Hermitian Toeplitz fit")
{
    RandomStream s(32);
    ComplexMatrix a(4, 4);
    for (auto &v : a.data())
        v = s.complex_normal();

    // Parameters: c0 real, then (re, im) of c1..c3. Each matrix entry gives a
    // real and an imaginary residual row.
    std::vector<RVec> rows;
    RVec rhs;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
        {
            RVec re(7, 0.0), im(7, 0.0);
            if (i == j)
                re[0] = 1.0;
            else
            {
                const std::size_t k = i > j ? i - j : j - i;
                const double sign = i > j ? 1.0 : -1.0;
                re[2 * k - 1] = 1.0;
                im[2 * k] = sign;
            }
            rows.push_back(re);
            rhs.push_back(a(i, j).real());
            rows.push_back(im);
            rhs.push_back(a(i, j).imag());
        }
    const RVec x = test::normal_equations(rows, rhs);
    const auto c = toeplitz_average(a);
    CHECK(std::abs(c[0] - cx(x[0])) < 1e-12);
    for (std::size_t k = 1; k < 4; ++k)
        CHECK(std::abs(c[k] - cx(x[2 * k - 1], x[2 * k])) < 1e-12);
}

TEST_CASE("numerical_rank, hpd_solve, least_squares, orthonormalize_rows")
{
    RandomStream s(41);
    ComplexMatrix x(6, 3);
    for (auto &v : x.data())
        v = s.complex_normal();
    CHECK(numerical_rank(x) == 3);
    CHECK(numerical_rank(matmul(x, adjoint(x))) == 3);
    CHECK(numerical_rank(ComplexMatrix(3, 3)) == 0);

    const auto hpd = add(matmul(adjoint(x), x), ComplexMatrix::identity(3));
    ComplexMatrix b(3, 2);
    for (auto &v : b.data())
        v = s.complex_normal();
    const auto sol = hpd_solve(hpd, b);
    CHECK(frobenius_distance(matmul(hpd, sol), b) < 1e-12);
    CHECK_THROWS_AS(hpd_solve(ComplexMatrix(2, 2), ComplexMatrix(2, 1)), NumericalFailure);

    RealMatrix ra(5, 3);
    RVec rb(5);
    std::vector<RVec> rows(5, RVec(3));
    for (std::size_t i = 0; i < 5; ++i)
    {
        rb[i] = s.normal();
        for (std::size_t j = 0; j < 3; ++j)
            rows[i][j] = ra(i, j) = s.normal();
    }
    const RVec ls = least_squares(ra, rb);
    const RVec ref = test::normal_equations(rows, rb);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK_THAT(ls[j], WithinAbs(ref[j], 1e-10));

    ComplexMatrix g(3, 7);
    for (auto &v : g.data())
        v = s.complex_normal();
    const auto q = orthonormalize_rows(g);
    CHECK(frobenius_distance(matmul(q, adjoint(q)), ComplexMatrix::identity(3)) < 1e-12);
}

TEST_CASE("gaussian_complex statistics and determinism")
{
    const auto a = gaussian_complex(100000, 7);
    const auto b = gaussian_complex(100000, 7);
    CHECK(a == b);
    double var = 0.0, var_re = 0.0;
    cx mean = 0.0;
    for (const auto &v : a)
    {
        mean += v;
        var += std::norm(v);
        var_re += v.real() * v.real();
    }
    mean /= static_cast<double>(a.size());
    var /= static_cast<double>(a.size());
    var_re /= static_cast<double>(a.size());
    CHECK(std::abs(var - 1.0) < 0.02);
    CHECK(std::abs(var_re - 0.5) < 0.01);
    CHECK(std::abs(mean) < 0.02);
    CHECK(gaussian_complex(8, 8) != gaussian_complex(8, 9));
}

TEST_CASE("tridiagonal eigensolver agrees with Jacobi")
{
    RandomStream s(51);
    for (std::size_t n : {1u, 4u, 9u, 33u})
    {
        const auto a = test::random_hermitian(n, s);
        const auto j = hermitian_eig(a);
        const auto t = hermitian_eig_tridiagonal(a);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(j.eigenvalues[i] - t.eigenvalues[i]) <= 1e-10 * frobenius_norm(a));
        CHECK(frobenius_distance(reconstruct(t), a) <= 1e-9 * frobenius_norm(a));
        CHECK(unitary_defect(t.eigenvectors) <= 1e-9);
    }
    ComplexMatrix bad(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig_tridiagonal(bad), InvalidArgument);
}
