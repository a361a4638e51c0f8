// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstdint>

#include "acs/rng.hpp"
#include "acs/sparsifier.hpp"

namespace acs
{

// T_dl x M' pilot with Psi Psi^H = P_dl I.
struct PilotMatrix
{
    ComplexMatrix psi;
    double power = 0.0;

    std::size_t length() const { return psi.rows(); } // T_dl
    std::size_t beams() const { return psi.cols(); }  // M'
};

// Orthonormalized rows of a seeded Gaussian matrix, scaled by sqrt(P_dl).
PilotMatrix make_pilot(std::size_t t_dl, std::size_t m_prime, double p_dl, std::uint64_t seed);

// Diagonal Gaussian prior on the effective channel B h. Only the listed
// positions (indices into the selected beams) carry power.
struct EffectiveChannelModel
{
    std::vector<std::size_t> positions;
    RVec variances; // one per position
    double n0 = 1.0;

    void validate(std::size_t m_prime) const;
};

// y = Psi B h + n, n ~ CN(0, N0 I).
CVec dl_observe(const PilotMatrix &pilot, const SparsifyingPrecoder &precoder, std::span<const cx> h,
                double n0, std::uint64_t seed);
CVec dl_observe(const PilotMatrix &pilot, const SparsifyingPrecoder &precoder, std::span<const cx> h,
                double n0, RandomStream &stream);

// Linear MMSE estimate Lambda Psi^H (Psi Lambda Psi^H + N0 I)^-1 y, length M'.
// Entries outside the modeled positions are exactly zero.
CVec mmse_effective(std::span<const cx> y, const PilotMatrix &pilot, const EffectiveChannelModel &model);

// Linear MMSE estimate with a full prior covariance R of B h (M' x M', PSD):
// R Psi^H (Psi R Psi^H + N0 I)^-1 y.
CVec mmse_effective_covariance(std::span<const cx> y, const PilotMatrix &pilot, const ComplexMatrix &prior,
                               double n0);

// Trace of the whitened error covariance,
// s - sum_i mu_i / (N0 + mu_i), mu_i eigenvalues of Lambda^1/2 F_S^H Psi^H Psi F_S Lambda^1/2.
// support_columns is M' x s (F_S), variances has length s.
double error_trace_oracle(const PilotMatrix &pilot, const ComplexMatrix &support_columns, const RVec &variances,
                          double n0);
// Same with F_S the coordinate columns of model.positions.
double error_trace_oracle(const PilotMatrix &pilot, const EffectiveChannelModel &model);

} // namespace acs
