// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace acs
{

ComplexMatrix adjoint(const ComplexMatrix &a)
{
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out(c, r) = std::conj(a(r, c));
    return out;
}

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.cols() != b.rows())
        throw InvalidArgument("matmul: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        auto orow = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const cx aik = a(i, k);
            if (aik == cx{})
                continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] += aik * brow[j];
        }
    }
    return out;
}

ComplexMatrix matmul_adj_left(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.rows() != b.rows())
        throw InvalidArgument("matmul_adj_left: row counts differ");
    ComplexMatrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k)
    {
        auto arow = a.row(k);
        auto brow = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i)
        {
            const cx aki = std::conj(arow[i]);
            if (aki == cx{})
                continue;
            auto orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] += aki * brow[j];
        }
    }
    return out;
}

CVec matvec(const ComplexMatrix &a, std::span<const cx> x)
{
    if (a.cols() != x.size())
        throw InvalidArgument("matvec: dimension mismatch");
    CVec out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        cx acc{};
        auto r = a.row(i);
        for (std::size_t j = 0; j < x.size(); ++j)
            acc += r[j] * x[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b, cx scale_b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("add: shape mismatch");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] += scale_b * b.data()[i];
    return out;
}

ComplexMatrix scale(const ComplexMatrix &a, cx s)
{
    ComplexMatrix out = a;
    for (auto &v : out.data())
        v *= s;
    return out;
}

RealMatrix transpose(const RealMatrix &a)
{
    RealMatrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out(c, r) = a(r, c);
    return out;
}

RealMatrix matmul(const RealMatrix &a, const RealMatrix &b)
{
    if (a.cols() != b.rows())
        throw InvalidArgument("matmul: inner dimensions differ");
    RealMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

RVec matvec(const RealMatrix &a, std::span<const double> x)
{
    if (a.cols() != x.size())
        throw InvalidArgument("matvec: dimension mismatch");
    RVec out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        auto r = a.row(i);
        out[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
    }
    return out;
}

double frobenius_norm(const ComplexMatrix &a)
{
    double s = 0.0;
    for (const auto &v : a.data())
        s += std::norm(v);
    return std::sqrt(s);
}

double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("frobenius_distance: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        s += std::norm(a.data()[i] - b.data()[i]);
    return std::sqrt(s);
}

double norm2(std::span<const cx> v)
{
    double s = 0.0;
    for (const auto &x : v)
        s += std::norm(x);
    return std::sqrt(s);
}

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

cx dot(std::span<const cx> a, std::span<const cx> b)
{
    if (a.size() != b.size())
        throw InvalidArgument("dot: length mismatch");
    cx s{};
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

cx trace(const ComplexMatrix &a)
{
    cx s{};
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
        s += a(i, i);
    return s;
}

bool is_hermitian(const ComplexMatrix &a, double rel_tol)
{
    if (a.rows() != a.cols())
        return false;
    const double scale = std::max(frobenius_norm(a), 1e-300);
    double asym = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            asym += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(asym) <= rel_tol * scale;
}

ComplexMatrix hermitian_part(const ComplexMatrix &a)
{
    if (a.rows() != a.cols())
        throw InvalidArgument("hermitian_part: matrix not square");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return out;
}

ComplexMatrix dft_matrix(std::size_t m)
{
    if (m == 0)
        throw InvalidArgument("dft_matrix: size must be >= 1");
    ComplexMatrix f(m, m);
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
        {
            // reduce the exponent mod m before scaling to keep the phase exact
            const auto k = static_cast<double>((r * c) % m);
            const double ph = -2.0 * std::numbers::pi * k / static_cast<double>(m);
            f(r, c) = s * cx(std::cos(ph), std::sin(ph));
        }
    return f;
}

ComplexMatrix toeplitz_from_column(std::span<const cx> c)
{
    const std::size_t m = c.size();
    ComplexMatrix t(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            t(i, j) = i >= j ? c[i - j] : std::conj(c[j - i]);
    return t;
}

CVec toeplitz_average(const ComplexMatrix &a)
{
    if (a.rows() != a.cols())
        throw InvalidArgument("toeplitz_average: matrix not square");
    const std::size_t m = a.rows();
    CVec c(m);
    for (std::size_t k = 0; k < m; ++k)
    {
        // subdiagonal k of A and conjugated superdiagonal k both describe c[k]
        cx s{};
        for (std::size_t j = 0; j + k < m; ++j)
            s += a(j + k, j) + std::conj(a(j, j + k));
        c[k] = s / (2.0 * static_cast<double>(m - k));
    }
    c[0] = c[0].real();
    return c;
}

HermitianEig hermitian_eig(const ComplexMatrix &input, const JacobiOptions &opt)
{
    if (!is_hermitian(input, 1e-10))
        throw InvalidArgument("hermitian_eig: input is not Hermitian");
    const std::size_t n = input.rows();
    ComplexMatrix a = hermitian_part(input);
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double fro = frobenius_norm(a);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    bool converged = fro == 0.0 || off_norm() <= opt.rel_tol * fro;
    for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep)
    {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const cx b = a(p, q);
                const double babs = std::abs(b);
                if (babs <= 1e-300 || babs < 1e-18 * fro)
                    continue;
                const double ap = a(p, p).real(), aq = a(q, q).real();
                const double theta = (aq - ap) / (2.0 * babs);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cx ph = std::conj(b) / babs; // exp(-j arg b)
                const cx u11 = c, u12 = s, u21 = -s * ph, u22 = c * ph;

                for (std::size_t r = 0; r < n; ++r)
                {
                    const cx arp = a(r, p), arq = a(r, q);
                    a(r, p) = arp * u11 + arq * u21;
                    a(r, q) = arp * u12 + arq * u22;
                    const cx vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp * u11 + vrq * u21;
                    v(r, q) = vrp * u12 + vrq * u22;
                }
                for (std::size_t col = 0; col < n; ++col)
                {
                    const cx apc = a(p, col), aqc = a(q, col);
                    a(p, col) = std::conj(u11) * apc + std::conj(u21) * aqc;
                    a(q, col) = std::conj(u12) * apc + std::conj(u22) * aqc;
                }
                a(p, p) = ap - t * babs;
                a(q, q) = aq + t * babs;
                a(p, q) = a(q, p) = cx{};
            }
        converged = off_norm() <= opt.rel_tol * fro;
    }
    if (!converged)
        throw NumericalFailure("hermitian_eig: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    HermitianEig out{RVec(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k)
    {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r)
            out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

ComplexMatrix reconstruct(const HermitianEig &eig)
{
    const std::size_t n = eig.eigenvalues.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double d = eig.eigenvalues[k];
        if (d == 0.0)
            continue;
        for (std::size_t i = 0; i < n; ++i)
        {
            const cx ui = d * eig.eigenvectors(i, k);
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += ui * std::conj(eig.eigenvectors(j, k));
        }
    }
    return out;
}

HermitianEig hermitian_eig_tridiagonal(const ComplexMatrix &a)
{
    if (a.rows() != a.cols())
        throw InvalidArgument("hermitian_eig_tridiagonal: matrix must be square");
    if (!is_hermitian(a))
        throw InvalidArgument("hermitian_eig_tridiagonal: matrix is not Hermitian");
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("hermitian_eig_tridiagonal: QR iteration did not converge");
    HermitianEig out;
    out.eigenvalues.resize(a.rows());
    out.eigenvectors = ComplexMatrix(a.rows(), a.rows());
    for (Eigen::Index j = 0; j < n; ++j)
    {
        out.eigenvalues[static_cast<std::size_t>(j)] = solver.eigenvalues()(j);
        for (Eigen::Index i = 0; i < n; ++i)
            out.eigenvectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = solver.eigenvectors()(i, j);
    }
    return out;
}

ComplexMatrix psd_project(const ComplexMatrix &a)
{
    if (a.rows() != a.cols())
        throw InvalidArgument("psd_project: matrix must be square");
    if (!is_hermitian(a))
        throw InvalidArgument("psd_project: matrix is not Hermitian");
    const auto n = static_cast<Eigen::Index>(a.rows());
    const Eigen::Map<const Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> am(a.data().data(), n, n);
    const Eigen::MatrixXcd herm = 0.5 * (am + am.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("psd_project: QR iteration did not converge");
    const auto &ev = solver.eigenvalues();
    Eigen::Index first_pos = 0;
    while (first_pos < n && ev(first_pos) <= 0.0)
        ++first_pos;
    if (first_pos == 0)
        return hermitian_part(a);

    // rank update with whichever side of the spectrum is smaller
    Eigen::MatrixXcd out;
    if (first_pos <= n - first_pos)
    {
        const auto u = solver.eigenvectors().leftCols(first_pos);
        out = herm - u * ev.head(first_pos).asDiagonal() * u.adjoint();
    }
    else
    {
        const auto u = solver.eigenvectors().rightCols(n - first_pos);
        out = u * ev.tail(n - first_pos).asDiagonal() * u.adjoint();
    }
    ComplexMatrix r(a.rows(), a.rows());
    for (Eigen::Index i = 0; i < n; ++i)
    {
        r(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = out(i, i).real();
        for (Eigen::Index j = 0; j < i; ++j)
        {
            const cx v = 0.5 * (out(i, j) + std::conj(out(j, i)));
            r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
            r(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = std::conj(v);
        }
    }
    return r;
}

std::size_t numerical_rank(const ComplexMatrix &a, double rel_tol)
{
    if (a.empty())
        return 0;
    const HermitianEig eig = hermitian_eig(hermitian_part(matmul_adj_left(a, a)));
    const double top = eig.eigenvalues.back();
    if (top <= 0.0)
        return 0;
    return static_cast<std::size_t>(std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                                                   [&](double d) { return d > top * rel_tol; }));
}

ComplexMatrix hpd_solve(const ComplexMatrix &a, const ComplexMatrix &b, double pivot_tol)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n)
        throw InvalidArgument("hpd_solve: dimension mismatch");
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_diag = std::max(max_diag, std::abs(a(i, i).real()));

    // lower-triangular L with A = L L^H
    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (!(d > pivot_tol * max_diag) || max_diag == 0.0)
            throw NumericalFailure("hpd_solve: matrix is singular or not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i)
        {
            cx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    ComplexMatrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            cx s = x(i, c);
            for (std::size_t k = 0; k < i; ++k)
                s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;)
        {
            cx s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k)
                s -= std::conj(l(k, ii)) * x(k, c);
            x(ii, c) = s / l(ii, ii);
        }
    }
    return x;
}

RVec least_squares(const RealMatrix &a, std::span<const double> b)
{
    const std::size_t m = a.rows(), n = a.cols();
    if (b.size() != m)
        throw InvalidArgument("least_squares: rhs length mismatch");
    if (n > m)
        throw InvalidArgument("least_squares: more unknowns than equations");
    const auto rows = static_cast<Eigen::Index>(m), cols = static_cast<Eigen::Index>(n);
    const Eigen::MatrixXd am =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(a.data().data(), rows, cols);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(am);
    double max_diag = 0.0;
    for (Eigen::Index k = 0; k < cols; ++k)
        max_diag = std::max(max_diag, std::abs(qr.matrixQR()(k, k)));
    for (Eigen::Index k = 0; k < cols; ++k)
        if (max_diag == 0.0 || std::abs(qr.matrixQR()(k, k)) <= 1e-13 * max_diag)
            throw NumericalFailure("least_squares: rank-deficient system");
    const Eigen::VectorXd x = qr.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), rows));
    return RVec(x.data(), x.data() + n);
}

ComplexMatrix orthonormalize_rows(const ComplexMatrix &a)
{
    if (a.rows() > a.cols())
        throw InvalidArgument("orthonormalize_rows: more rows than columns");
    ComplexMatrix q = a;
    const std::size_t n = q.cols();
    for (std::size_t i = 0; i < q.rows(); ++i)
    {
        auto ri = q.row(i);
        // two passes of modified Gram-Schmidt
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < i; ++k)
            {
                auto rk = q.row(k);
                cx proj{};
                for (std::size_t j = 0; j < n; ++j)
                    proj += std::conj(rk[j]) * ri[j];
                for (std::size_t j = 0; j < n; ++j)
                    ri[j] -= proj * rk[j];
            }
        const double nr = norm2(std::span<const cx>(ri.data(), n));
        if (nr <= 1e-12)
            throw NumericalFailure("orthonormalize_rows: rows are linearly dependent");
        for (auto &v : ri)
            v /= nr;
    }
    return q;
}

} // namespace acs
