// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acs/errors.hpp"

namespace acs
{

// Parse or validation problem in an experiment config. line() is 0 when the
// problem is not tied to one line (missing key, cross-key rule).
class ConfigError : public InvalidArgument
{
public:
    ConfigError(std::string key, std::size_t line, const std::string &message);

    const std::string &key() const { return key_; }
    std::size_t line() const { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

struct ExperimentConfig
{
    // required
    std::size_t M = 0;
    std::size_t K = 0;
    std::size_t T = 0;
    std::vector<std::size_t> tdl_list;
    std::vector<double> snr_db_list;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;

    // optional
    std::size_t n_ul = 1000;
    std::size_t grid_factor = 4;
    double theta_max_deg = 60.0;
    double alpha = 2140.0 / 1950.0;
    std::size_t n_clusters = 3;
    std::size_t clusters_per_user = 2;
    double cluster_width = 0.2;
    double th_rel = 0.01;
    double p0 = 0.0;
    double epsilon_factor = 0.5;
    double ul_noise_var = 0.01;
    bool exact_covariance = false;
    bool genie_prior = false;
    bool covariance_prior = true; // MMSE prior B C_dl B^H; false uses the thresholded beam spectrum
    bool normalize_asf = true;
    std::string output_path;

    void validate() const; // throws ConfigError
};

// Flat "key: value" or "key = value" lines, '#' starts a comment, lists as
// [a, b, c]. Numbers may be written as a ratio "2140/1950". Unknown, duplicate
// or missing keys are errors.
ExperimentConfig parse_config_text(const std::string &text);
ExperimentConfig parse_config(const std::string &path);

std::string config_to_text(const ExperimentConfig &cfg);

} // namespace acs
