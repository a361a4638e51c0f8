// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acs/numerics.hpp"
#include "acs/rng.hpp"

namespace acs
{

enum class Band
{
    Uplink,
    Downlink
};

const char *band_name(Band band);

// Uniform linear array geometry. Antenna spacing is kappa * lambda_ul / (2 sin theta_max),
// so the UL response along xi = sin(theta)/sin(theta_max) is exp(j m pi kappa xi).
struct ArrayConfig
{
    std::size_t antennas = 64;
    double theta_max = 1.0471975511965976; // 60 degrees
    double alpha = 2140.0 / 1950.0;        // f_dl / f_ul
    double kappa = 1.0;

    void validate() const;
    // Spatial frequency multiplier of the given band.
    double band_factor(Band band) const;
};

// Hermitian PSD Toeplitz covariance, stored as its first column.
struct ToeplitzCovariance
{
    CVec first_column;
    Band band = Band::Uplink;

    std::size_t size() const { return first_column.size(); }
    ComplexMatrix matrix() const { return toeplitz_from_column(first_column); }
    double trace() const { return first_column.empty() ? 0.0 : first_column[0].real() * static_cast<double>(size()); }
};

struct AsfInterval
{
    double a = 0.0; // xi-coordinates, -1 <= a < b <= 1
    double b = 0.0;
    double density = 0.0;
};

struct AsfPointMass
{
    double xi = 0.0;
    double mass = 0.0;
};

// Angular scattering function over xi = sin(theta)/sin(theta_max):
// a piecewise-constant density plus point masses.
struct AngularScatteringFunction
{
    std::vector<AsfInterval> intervals;
    std::vector<AsfPointMass> point_masses;
    bool normalized = false;

    double total_mass() const;
    void validate() const;

    static AngularScatteringFunction uniform();
    static AngularScatteringFunction point(double xi);
    // Equal density over the union of disjoint intervals. When normalize is
    // set the density is 1/(total width), otherwise `density` is used as is.
    static AngularScatteringFunction union_of(const std::vector<std::pair<double, double>> &spans,
                                              bool normalize, double density = 1.0);
};

CVec array_response(const ArrayConfig &cfg, double theta, Band band);
// Response in xi-coordinates, no range check beyond |xi| <= 1.
CVec array_response_xi(const ArrayConfig &cfg, double xi, Band band);

// First column in closed form: per interval rho (e^{j w b} - e^{j w a}) / (j w),
// w = m pi (band factor); point masses add mass * e^{j w xi}.
ToeplitzCovariance true_covariance(const ArrayConfig &cfg, const AngularScatteringFunction &asf, Band band);

// Draws zero-mean complex Gaussian vectors with a fixed covariance by
// coloring i.i.d. CN(0,1) samples with U diag(sqrt(lambda)).
class ChannelSampler
{
public:
    explicit ChannelSampler(const ComplexMatrix &covariance);
    explicit ChannelSampler(const ToeplitzCovariance &covariance);

    std::size_t dimension() const { return coloring_.rows(); }
    CVec draw(RandomStream &stream) const;
    ComplexMatrix draw(std::size_t n, RandomStream &stream) const; // columns are samples

private:
    ComplexMatrix coloring_;
    std::vector<std::size_t> active_; // eigen-directions with positive power
};

// Columns are i.i.d. draws from true_covariance(cfg, asf, band).
ComplexMatrix sample_channels(const ArrayConfig &cfg, const AngularScatteringFunction &asf, Band band,
                              std::size_t n, RandomStream &stream);

struct ScenarioParams
{
    std::size_t n_clusters = 3;
    std::size_t clusters_per_user = 2;
    double cluster_width = 0.2;
    std::size_t users = 8;
    std::uint64_t seed = 1;
    bool normalize = true;
    double unnormalized_density = 2.5;
};

struct UserGeometry
{
    std::vector<std::size_t> cluster_indices;
    AngularScatteringFunction asf;
};

struct Scenario
{
    ScenarioParams params;
    std::vector<AsfInterval> clusters; // density unused at this level
    std::vector<UserGeometry> users;
};

// Places non-overlapping clusters in [-1, 1] and draws each user's subset.
// Placement splits the free length 2 - n*w into n+1 uniformly random gaps,
// which always succeeds when n*w <= 2.
Scenario make_scenario(const ScenarioParams &params);
Scenario make_scenario(const ScenarioParams &params, RandomStream &stream);

// JSON layout:
// { "seed": u64, "cluster_width": w, "normalize": bool, "unnormalized_density": d,
//   "clusters_per_user": n, "clusters": [[a, b], ...],
//   "users": [ { "clusters": [i, j] }, ... ] }
std::string scenario_to_json(const Scenario &s);
Scenario scenario_from_json(const std::string &text);

} // namespace acs
