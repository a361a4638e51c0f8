// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

#include "acs/config.hpp"
#include "acs/probing.hpp"

namespace acs
{

// V = H (H^H H)^-1 J^1/2 with unit-norm columns, uniform power P_dl / K''.
struct ZfPrecoder
{
    ComplexMatrix v; // M' x K''
    RVec j;          // normalization gains
    RVec p;          // per-stream powers

    std::size_t streams() const { return v.cols(); }
};

// Throws NumericalFailure when H_hat is rank deficient.
ZfPrecoder zf_precoder(const ComplexMatrix &h_hat_eff, double p_dl);

// b(k, k') = (B h_k)^H v_k' sqrt(P_k'), one row per served user.
ComplexMatrix effective_gains(const std::vector<CVec> &h_true, const SparsifyingPrecoder &precoder,
                              const ZfPrecoder &zf);

// (1 - T_dl/T) sum_k log2(1 + |b_kk|^2 / (1 + sum_{k' != k} |b_kk'|^2)).
double sum_rate(const ComplexMatrix &b, std::size_t t_dl, std::size_t t);

// Greedy ZF selection on estimated effective channels: repeatedly add the
// candidate with the largest estimated ZF sum rate, stop when no addition
// increases it. Rank-deficient additions are skipped. Returns candidate indices
// ascending.
std::vector<std::size_t> greedy_user_selection(const std::vector<CVec> &candidates, double p_dl,
                                               std::size_t t_dl, std::size_t t);

// Estimated ZF sum rate of a subset, perfect CSI assumed on the estimates.
// -infinity when the subset is rank deficient.
double estimated_zf_rate(const std::vector<CVec> &candidates, const std::vector<std::size_t> &subset,
                         double p_dl, std::size_t t_dl, std::size_t t);

// ZF on the given columns; on rank deficiency the column with the smallest J
// (computed on a ridge-regularized Gram) is dropped and the solve retried.
// kept receives the surviving column indices.
ZfPrecoder zf_with_retry(const ComplexMatrix &h_hat_eff, double p_dl, std::vector<std::size_t> &kept);

// ||H - H_hat||_F^2 / ||H||_F^2.
double normalized_error(const ComplexMatrix &h, const ComplexMatrix &h_hat);

struct ExperimentRecord
{
    std::size_t trial = 0;
    std::uint64_t trial_seed = 0;
    std::size_t t_dl = 0;
    double snr_db = 0.0;
    std::size_t served = 0;
    std::size_t matching_size = 0;
    double err_norm = 0.0;
    double sum_rate_bits = 0.0;
    RVec gains; // |b_kk| per served user
};

struct TrialFailure
{
    std::size_t trial = 0;
    std::string message;
};

struct ExperimentResult
{
    std::vector<ExperimentRecord> records; // sorted by (trial, T_dl index, SNR index)
    std::vector<TrialFailure> failures;
};

struct RunOptions
{
    std::size_t threads = 1;
};

// Full Monte Carlo pipeline per trial: scenario, UL snapshots, covariance
// projection, DL extrapolation, spectra, sparsification, pilot probing, MMSE,
// greedy ZF, metrics. Deterministic per seed and independent of thread count.
ExperimentResult run_experiment(const ExperimentConfig &cfg, const RunOptions &options = {});

std::string records_to_csv(const std::vector<ExperimentRecord> &records);

// Per (T_dl, SNR): trial count, means and standard errors of served,
// matching_size, err_norm and sum_rate_bits, plus the failure list.
std::string summary_to_json(const ExperimentConfig &cfg, const ExperimentResult &result);

struct GridSummary
{
    std::size_t t_dl = 0;
    double snr_db = 0.0;
    std::size_t count = 0;
    double served_mean = 0.0, served_se = 0.0;
    double matching_mean = 0.0, matching_se = 0.0;
    double err_mean = 0.0, err_se = 0.0;
    double rate_mean = 0.0, rate_se = 0.0;
};

std::vector<GridSummary> summarize(const ExperimentConfig &cfg, const std::vector<ExperimentRecord> &records);

} // namespace acs
