// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <json.hpp>

namespace acs
{

using std::numbers::pi;

const char *band_name(Band band)
{
    return band == Band::Uplink ? "UL" : "DL";
}

void ArrayConfig::validate() const
{
    if (antennas < 1)
        throw InvalidArgument("ArrayConfig: antennas must be >= 1");
    if (!(theta_max > 0.0 && theta_max <= pi / 2 + 1e-15))
        throw InvalidArgument("ArrayConfig: theta_max must be in (0, pi/2]");
    if (!(alpha >= 1.0))
        throw InvalidArgument("ArrayConfig: alpha must be >= 1");
    if (!(kappa > 0.0))
        throw InvalidArgument("ArrayConfig: kappa must be positive");
}

double ArrayConfig::band_factor(Band band) const
{
    return kappa * (band == Band::Downlink ? alpha : 1.0);
}

double AngularScatteringFunction::total_mass() const
{
    double s = 0.0;
    for (const auto &iv : intervals)
        s += iv.density * (iv.b - iv.a);
    for (const auto &pm : point_masses)
        s += pm.mass;
    return s;
}

void AngularScatteringFunction::validate() const
{
    for (const auto &iv : intervals)
    {
        if (!(iv.a >= -1.0 && iv.a < iv.b && iv.b <= 1.0))
            throw InvalidArgument("ASF: interval must satisfy -1 <= a < b <= 1");
        if (!(iv.density >= 0.0))
            throw InvalidArgument("ASF: negative density");
    }
    for (const auto &pm : point_masses)
    {
        if (!(pm.xi >= -1.0 && pm.xi <= 1.0))
            throw InvalidArgument("ASF: point mass outside [-1, 1]");
        if (!(pm.mass >= 0.0))
            throw InvalidArgument("ASF: negative point mass");
    }
    if (normalized && std::abs(total_mass() - 1.0) > 1e-12)
        throw InvalidArgument("ASF: normalized flag set but total mass != 1");
}

AngularScatteringFunction AngularScatteringFunction::uniform()
{
    return {{{-1.0, 1.0, 0.5}}, {}, true};
}

AngularScatteringFunction AngularScatteringFunction::point(double xi)
{
    return {{}, {{xi, 1.0}}, true};
}

AngularScatteringFunction AngularScatteringFunction::union_of(const std::vector<std::pair<double, double>> &spans,
                                                              bool normalize, double density)
{
    AngularScatteringFunction asf;
    double width = 0.0;
    for (const auto &[a, b] : spans)
        width += b - a;
    const double rho = normalize ? (width > 0 ? 1.0 / width : 0.0) : density;
    for (const auto &[a, b] : spans)
        asf.intervals.push_back({a, b, rho});
    asf.normalized = normalize && width > 0;
    asf.validate();
    return asf;
}

CVec array_response_xi(const ArrayConfig &cfg, double xi, Band band)
{
    const double w = pi * cfg.band_factor(band) * xi;
    CVec a(cfg.antennas);
    for (std::size_t m = 0; m < cfg.antennas; ++m)
    {
        const double ph = w * static_cast<double>(m);
        a[m] = {std::cos(ph), std::sin(ph)};
    }
    return a;
}

CVec array_response(const ArrayConfig &cfg, double theta, Band band)
{
    cfg.validate();
    if (!(std::abs(theta) <= cfg.theta_max * (1.0 + 1e-12)))
        throw InvalidArgument("array_response: |theta| exceeds theta_max");
    const double xi = std::clamp(std::sin(theta) / std::sin(cfg.theta_max), -1.0, 1.0);
    return array_response_xi(cfg, xi, band);
}

ToeplitzCovariance true_covariance(const ArrayConfig &cfg, const AngularScatteringFunction &asf, Band band)
{
    cfg.validate();
    asf.validate();
    const double f = cfg.band_factor(band);
    ToeplitzCovariance out{CVec(cfg.antennas), band};
    for (std::size_t m = 0; m < cfg.antennas; ++m)
    {
        const double w = pi * f * static_cast<double>(m);
        cx c{};
        for (const auto &iv : asf.intervals)
        {
            if (m == 0)
                c += iv.density * (iv.b - iv.a);
            else
            {
                const cx eb = std::polar(1.0, w * iv.b), ea = std::polar(1.0, w * iv.a);
                c += iv.density * (eb - ea) / cx(0.0, w);
            }
        }
        for (const auto &pm : asf.point_masses)
            c += pm.mass * std::polar(1.0, w * pm.xi);
        out.first_column[m] = c;
    }
    out.first_column[0] = out.first_column[0].real();
    return out;
}

ChannelSampler::ChannelSampler(const ComplexMatrix &covariance)
{
    const HermitianEig eig = hermitian_eig_tridiagonal(covariance);
    const std::size_t n = eig.eigenvalues.size();
    coloring_ = ComplexMatrix(n, n);
    // round-off eigenvalues of a rank-deficient covariance are dropped
    const double floor = n > 0 ? 1e-12 * std::max(eig.eigenvalues.back(), 0.0) : 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const double d = eig.eigenvalues[k];
        if (d <= floor)
            continue;
        active_.push_back(k);
        const double s = std::sqrt(d);
        for (std::size_t r = 0; r < n; ++r)
            coloring_(r, k) = s * eig.eigenvectors(r, k);
    }
}

ChannelSampler::ChannelSampler(const ToeplitzCovariance &covariance) : ChannelSampler(covariance.matrix()) {}

CVec ChannelSampler::draw(RandomStream &stream) const
{
    const std::size_t n = dimension();
    // one CN(0,1) draw per eigen-direction keeps streams aligned across ASFs
    const CVec g = gaussian_complex(n, stream);
    CVec h(n);
    for (std::size_t k : active_)
        for (std::size_t r = 0; r < n; ++r)
            h[r] += coloring_(r, k) * g[k];
    return h;
}

ComplexMatrix ChannelSampler::draw(std::size_t n, RandomStream &stream) const
{
    if (n < 1)
        throw InvalidArgument("ChannelSampler: sample count must be >= 1");
    ComplexMatrix out(dimension(), n);
    for (std::size_t c = 0; c < n; ++c)
    {
        const CVec h = draw(stream);
        out.set_col(c, h);
    }
    return out;
}

ComplexMatrix sample_channels(const ArrayConfig &cfg, const AngularScatteringFunction &asf, Band band,
                              std::size_t n, RandomStream &stream)
{
    const ChannelSampler sampler(true_covariance(cfg, asf, band));
    return sampler.draw(n, stream);
}

Scenario make_scenario(const ScenarioParams &params)
{
    RandomStream stream = RandomStream::derive(params.seed, Purpose::Scenario);
    return make_scenario(params, stream);
}

Scenario make_scenario(const ScenarioParams &p, RandomStream &stream)
{
    if (p.n_clusters < 1)
        throw InvalidArgument("make_scenario: need at least one cluster");
    if (p.clusters_per_user < 1 || p.clusters_per_user > p.n_clusters)
        throw InvalidArgument("make_scenario: clusters_per_user must be in [1, n_clusters]");
    if (!(p.cluster_width > 0.0))
        throw InvalidArgument("make_scenario: cluster_width must be positive");
    const double free = 2.0 - p.cluster_width * static_cast<double>(p.n_clusters);
    if (free < -1e-12)
        throw InvalidArgument("make_scenario: clusters cannot be placed without overlap");

    // uniform gaps from sorted uniforms on [0, free]
    std::vector<double> cuts(p.n_clusters);
    for (auto &c : cuts)
        c = std::max(free, 0.0) * stream.uniform();
    std::sort(cuts.begin(), cuts.end());
    std::vector<AsfInterval> placed;
    for (std::size_t i = 0; i < p.n_clusters; ++i)
    {
        const double a = -1.0 + cuts[i] + p.cluster_width * static_cast<double>(i);
        placed.push_back({a, std::min(a + p.cluster_width, 1.0), 0.0});
    }
    // random labels so cluster index carries no position information
    std::vector<std::size_t> perm(p.n_clusters);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[stream.uniform_int(i)]);

    Scenario s;
    s.params = p;
    for (std::size_t i = 0; i < p.n_clusters; ++i)
        s.clusters.push_back(placed[perm[i]]);

    for (std::size_t k = 0; k < p.users; ++k)
    {
        std::vector<std::size_t> pool(p.n_clusters);
        std::iota(pool.begin(), pool.end(), 0);
        UserGeometry u;
        for (std::size_t j = 0; j < p.clusters_per_user; ++j)
        {
            const std::size_t pick = j + stream.uniform_int(pool.size() - j);
            std::swap(pool[j], pool[pick]);
            u.cluster_indices.push_back(pool[j]);
        }
        std::sort(u.cluster_indices.begin(), u.cluster_indices.end());
        s.users.push_back(std::move(u));
    }
    for (auto &u : s.users)
    {
        std::vector<std::pair<double, double>> spans;
        for (auto idx : u.cluster_indices)
            spans.emplace_back(s.clusters[idx].a, s.clusters[idx].b);
        u.asf = AngularScatteringFunction::union_of(spans, p.normalize, p.unnormalized_density);
    }
    return s;
}

std::string scenario_to_json(const Scenario &s)
{
    nlohmann::json j;
    j["seed"] = s.params.seed;
    j["cluster_width"] = s.params.cluster_width;
    j["normalize"] = s.params.normalize;
    j["unnormalized_density"] = s.params.unnormalized_density;
    j["clusters_per_user"] = s.params.clusters_per_user;
    j["clusters"] = nlohmann::json::array();
    for (const auto &c : s.clusters)
        j["clusters"].push_back({c.a, c.b});
    j["users"] = nlohmann::json::array();
    for (const auto &u : s.users)
        j["users"].push_back({{"clusters", u.cluster_indices}});
    return j.dump(2);
}

Scenario scenario_from_json(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw InvalidArgument(std::string("scenario_from_json: ") + e.what());
    }
    try
    {
        Scenario s;
        s.params.seed = j.at("seed").get<std::uint64_t>();
        s.params.cluster_width = j.at("cluster_width").get<double>();
        s.params.normalize = j.value("normalize", true);
        s.params.unnormalized_density = j.value("unnormalized_density", 2.5);
        s.params.clusters_per_user = j.value("clusters_per_user", std::size_t{2});
        for (const auto &c : j.at("clusters"))
            s.clusters.push_back({c.at(0).get<double>(), c.at(1).get<double>(), 0.0});
        s.params.n_clusters = s.clusters.size();
        for (const auto &uj : j.at("users"))
        {
            UserGeometry u;
            u.cluster_indices = uj.at("clusters").get<std::vector<std::size_t>>();
            auto sorted = u.cluster_indices;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidArgument("scenario_from_json: repeated cluster index");
            std::vector<std::pair<double, double>> spans;
            for (auto idx : u.cluster_indices)
            {
                if (idx >= s.clusters.size())
                    throw InvalidArgument("scenario_from_json: cluster index out of range");
                spans.emplace_back(s.clusters[idx].a, s.clusters[idx].b);
            }
            u.asf = AngularScatteringFunction::union_of(spans, s.params.normalize, s.params.unnormalized_density);
            s.users.push_back(std::move(u));
        }
        s.params.users = s.users.size();
        return s;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw InvalidArgument(std::string("scenario_from_json: ") + e.what());
    }
}

} // namespace acs
