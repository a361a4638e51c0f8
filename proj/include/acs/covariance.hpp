// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <string>

#include "acs/channel_model.hpp"
#include "acs/opt/nnls.hpp"

namespace acs
{

// (1/N) Y Y^H - sigma2 I. Columns of y are observations. May be indefinite.
ComplexMatrix sample_covariance(const ComplexMatrix &y, double sigma2);

struct ProjectionOptions
{
    double rel_tol = 1e-8; // successive-iterate change relative to ||A||_F
    std::size_t max_iterations = 5000;
};

enum class ProjectionStatus
{
    Converged,
    IterationLimit // last iterate returned
};

struct ProjectionResult
{
    ToeplitzCovariance covariance;
    ProjectionStatus status = ProjectionStatus::Converged;
    std::size_t iterations = 0;
    double last_change = 0.0; // Frobenius, absolute
};

// Frobenius-nearest Hermitian Toeplitz PSD matrix, by Dykstra's alternating
// projections between the Toeplitz subspace and the PSD cone. The Toeplitz
// part of the final iterate gets the smallest diagonal shift that makes it PSD.
ProjectionResult project_toeplitz_psd(const ComplexMatrix &a, Band band = Band::Uplink,
                                      const ProjectionOptions &options = {});

// Nonnegative weights on a uniform xi-grid. Grid point i (0-based) sits at
// xi_i = -1 + 2 i / G, theta_i = asin(xi_i sin(theta_max)).
struct AsfEstimate
{
    std::size_t antennas = 0;
    RVec xi;
    RVec theta;
    RVec weights;           // z, coefficients of the columns a_ul(theta_i) / sqrt(M)
    double residual_norm = 0.0;

    std::size_t grid_size() const { return xi.size(); }
    // Point-mass measure on the grid: gamma_i = z_i / sqrt(M).
    RVec measure() const;
};

// Solves min ||G z - c_ul|| over z >= 0 on the real-stacked system.
// Requires grid_size >= M.
AsfEstimate estimate_asf(const ToeplitzCovariance &c_ul, const ArrayConfig &cfg, std::size_t grid_size,
                         const opt::Tolerances &tol = opt::default_tolerances());

// Fourier samples of the estimated measure at the given band: sum_i gamma_i e^{j c m pi xi_i}.
CVec resample_measure(const AsfEstimate &est, const ArrayConfig &cfg, Band band);

// DL covariance from the estimated measure. Round-off negativity is removed
// by the smallest diagonal shift that makes the Toeplitz matrix PSD, which
// keeps the Toeplitz structure.
ToeplitzCovariance extrapolate_dl(const AsfEstimate &est, const ArrayConfig &cfg);

// Diagonal of F^H C F, entries clipped at zero:
// lambda_m = (1/M) sum_d (M - |d|) c_d e^{j 2 pi m d / M}.
RVec circulant_eigenvalues(const ToeplitzCovariance &c);

// CSV text: "index,real,imag" rows for a first column, "index,lambda" for a spectrum.
std::string covariance_to_csv(const ToeplitzCovariance &c);
std::string spectrum_to_csv(const RVec &lambda);

} // namespace acs
