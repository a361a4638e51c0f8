// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "acs/errors.hpp"

namespace acs
{

using cx = std::complex<double>;
using CVec = std::vector<cx>;
using RVec = std::vector<double>;

// Dense row-major matrix. Used with T = cx for everything channel related and
// T = double for the optimization kit.
template <typename T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data))
    {
        if (data_.size() != rows_ * cols_)
            throw InvalidArgument("Matrix: entry count does not match dimensions");
    }

    static Matrix identity(std::size_t n)
    {
        Matrix out(n, n);
        for (std::size_t i = 0; i < n; ++i)
            out(i, i) = T(1);
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<T> col(std::size_t c) const
    {
        std::vector<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            out[r] = (*this)(r, c);
        return out;
    }
    void set_col(std::size_t c, std::span<const T> v)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, c) = v[r];
    }

    const std::vector<T> &data() const { return data_; }
    std::vector<T> &data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cx>;
using RealMatrix = Matrix<double>;

// Eigenvalues ascending; eigenvector i is column i.
struct HermitianEig
{
    RVec eigenvalues;
    ComplexMatrix eigenvectors;
};

// ---- basic algebra ---------------------------------------------------------

ComplexMatrix adjoint(const ComplexMatrix &a);
ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b);
// a^H * b without forming a^H.
ComplexMatrix matmul_adj_left(const ComplexMatrix &a, const ComplexMatrix &b);
CVec matvec(const ComplexMatrix &a, std::span<const cx> x);
ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b, cx scale_b = 1.0);
ComplexMatrix scale(const ComplexMatrix &a, cx s);

RealMatrix transpose(const RealMatrix &a);
RealMatrix matmul(const RealMatrix &a, const RealMatrix &b);
RVec matvec(const RealMatrix &a, std::span<const double> x);

double frobenius_norm(const ComplexMatrix &a);
double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b);
double norm2(std::span<const cx> v);
double norm2(std::span<const double> v);
cx dot(std::span<const cx> a, std::span<const cx> b); // sum conj(a_i) b_i
cx trace(const ComplexMatrix &a);

bool is_hermitian(const ComplexMatrix &a, double rel_tol = 1e-10);
ComplexMatrix hermitian_part(const ComplexMatrix &a);

// ---- structured matrices ---------------------------------------------------

// Unitary DFT, entry (m,n) = exp(-j 2 pi m n / M) / sqrt(M).
ComplexMatrix dft_matrix(std::size_t m);

// Hermitian Toeplitz matrix with the given first column:
// T(i,j) = c[i-j] for i >= j, conj(c[j-i]) otherwise.
ComplexMatrix toeplitz_from_column(std::span<const cx> first_column);

// Orthogonal projection onto Hermitian Toeplitz matrices, returned as the
// first column. Entry k is the mean of the k-th subdiagonal of (A + A^H)/2.
CVec toeplitz_average(const ComplexMatrix &a);

// ---- eigen / PSD -----------------------------------------------------------

struct JacobiOptions
{
    int max_sweeps = 100;
    double rel_tol = 1e-12; // off-diagonal Frobenius norm relative to ||A||_F
};

// Cyclic Jacobi for Hermitian matrices.
HermitianEig hermitian_eig(const ComplexMatrix &a, const JacobiOptions &opt = {});

// Householder tridiagonalization with implicit QR (Eigen). Same contract as
// hermitian_eig; used where many decompositions are needed.
HermitianEig hermitian_eig_tridiagonal(const ComplexMatrix &a);

// Frobenius-nearest PSD matrix: eigenvalues clipped at zero.
ComplexMatrix psd_project(const ComplexMatrix &a);

ComplexMatrix reconstruct(const HermitianEig &eig);

// Count of eigenvalues of A^H A above max_eigenvalue * rel_tol.
std::size_t numerical_rank(const ComplexMatrix &a, double rel_tol = 1e-10);

// Solves A X = B for Hermitian positive definite A via Cholesky.
// Throws NumericalFailure when a pivot falls below pivot_tol * max|diag|.
ComplexMatrix hpd_solve(const ComplexMatrix &a, const ComplexMatrix &b, double pivot_tol = 1e-14);

// Least squares min ||A x - b|| for full column rank real A (Householder QR).
RVec least_squares(const RealMatrix &a, std::span<const double> b);

// Orthonormalizes the rows of a (rows <= cols) by modified Gram-Schmidt.
ComplexMatrix orthonormalize_rows(const ComplexMatrix &a);

} // namespace acs
