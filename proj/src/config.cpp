// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace acs
{

ConfigError::ConfigError(std::string key, std::size_t line, const std::string &message)
    : InvalidArgument((line ? "line " + std::to_string(line) + ": " : std::string{}) +
                      (key.empty() ? std::string{} : "'" + key + "': ") + message),
      key_(std::move(key)), line_(line)
{
}

namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Entry
{
    std::string key;
    std::string value;
    std::size_t line;
};

double parse_number(const Entry &e, const std::string &tok)
{
    const auto slash = tok.find('/');
    if (slash != std::string::npos)
    {
        const double num = parse_number(e, trim(tok.substr(0, slash)));
        const double den = parse_number(e, trim(tok.substr(slash + 1)));
        if (den == 0.0)
            throw ConfigError(e.key, e.line, "division by zero");
        return num / den;
    }
    double v = 0.0;
    const auto *end = tok.data() + tok.size();
    const auto r = std::from_chars(tok.data(), end, v);
    if (tok.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
        throw ConfigError(e.key, e.line, "expected a number, got '" + tok + "'");
    return v;
}

std::uint64_t parse_unsigned(const Entry &e, const std::string &tok)
{
    std::uint64_t v = 0;
    const auto *end = tok.data() + tok.size();
    const auto r = std::from_chars(tok.data(), end, v);
    if (tok.empty() || r.ec != std::errc() || r.ptr != end)
        throw ConfigError(e.key, e.line, "expected a nonnegative integer, got '" + tok + "'");
    return v;
}

bool parse_bool(const Entry &e, const std::string &tok)
{
    if (tok == "true")
        return true;
    if (tok == "false")
        return false;
    throw ConfigError(e.key, e.line, "expected true or false, got '" + tok + "'");
}

std::vector<std::string> parse_list(const Entry &e)
{
    const std::string &v = e.value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError(e.key, e.line, "expected a list like [a, b]");
    std::vector<std::string> out;
    const std::string body = trim(std::string_view(v).substr(1, v.size() - 2));
    if (body.empty())
        return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

std::string unquote(const std::string &v)
{
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
        return v.substr(1, v.size() - 2);
    return v;
}

using Setter = std::function<void(ExperimentConfig &, const Entry &)>;

std::map<std::string, Setter> setters()
{
    auto size = [](std::size_t ExperimentConfig::*f) -> Setter {
        return [f](ExperimentConfig &c, const Entry &e) { c.*f = parse_unsigned(e, e.value); };
    };
    auto real = [](double ExperimentConfig::*f) -> Setter {
        return [f](ExperimentConfig &c, const Entry &e) { c.*f = parse_number(e, e.value); };
    };
    auto flag = [](bool ExperimentConfig::*f) -> Setter {
        return [f](ExperimentConfig &c, const Entry &e) { c.*f = parse_bool(e, e.value); };
    };
    return {
        {"M", size(&ExperimentConfig::M)},
        {"K", size(&ExperimentConfig::K)},
        {"T", size(&ExperimentConfig::T)},
        {"tdl_list",
         [](ExperimentConfig &c, const Entry &e) {
             for (const auto &t : parse_list(e))
                 c.tdl_list.push_back(parse_unsigned(e, t));
         }},
        {"snr_db_list",
         [](ExperimentConfig &c, const Entry &e) {
             for (const auto &t : parse_list(e))
                 c.snr_db_list.push_back(parse_number(e, t));
         }},
        {"n_trials", size(&ExperimentConfig::n_trials)},
        {"seed", [](ExperimentConfig &c, const Entry &e) { c.seed = parse_unsigned(e, e.value); }},
        {"n_ul", size(&ExperimentConfig::n_ul)},
        {"grid_factor", size(&ExperimentConfig::grid_factor)},
        {"theta_max_deg", real(&ExperimentConfig::theta_max_deg)},
        {"alpha", real(&ExperimentConfig::alpha)},
        {"n_clusters", size(&ExperimentConfig::n_clusters)},
        {"clusters_per_user", size(&ExperimentConfig::clusters_per_user)},
        {"cluster_width", real(&ExperimentConfig::cluster_width)},
        {"th_rel", real(&ExperimentConfig::th_rel)},
        {"p0", real(&ExperimentConfig::p0)},
        {"epsilon_factor", real(&ExperimentConfig::epsilon_factor)},
        {"ul_noise_var", real(&ExperimentConfig::ul_noise_var)},
        {"exact_covariance", flag(&ExperimentConfig::exact_covariance)},
        {"genie_prior", flag(&ExperimentConfig::genie_prior)},
        {"covariance_prior", flag(&ExperimentConfig::covariance_prior)},
        {"normalize_asf", flag(&ExperimentConfig::normalize_asf)},
        {"output_path", [](ExperimentConfig &c, const Entry &e) { c.output_path = unquote(e.value); }},
    };
}

} // namespace

void ExperimentConfig::validate() const
{
    auto positive = [](const char *key, std::size_t v) {
        if (v == 0)
            throw ConfigError(key, 0, "must be >= 1");
    };
    positive("M", M);
    positive("K", K);
    positive("T", T);
    positive("n_trials", n_trials);
    positive("n_ul", n_ul);
    positive("grid_factor", grid_factor);
    positive("n_clusters", n_clusters);
    positive("clusters_per_user", clusters_per_user);
    if (tdl_list.empty())
        throw ConfigError("tdl_list", 0, "must not be empty");
    for (std::size_t t : tdl_list)
        if (t == 0 || t > T)
            throw ConfigError("tdl_list", 0, "entry " + std::to_string(t) + " outside [1, T = " +
                                                 std::to_string(T) + "]");
    if (snr_db_list.empty())
        throw ConfigError("snr_db_list", 0, "must not be empty");
    if (clusters_per_user > n_clusters)
        throw ConfigError("clusters_per_user", 0, "must not exceed n_clusters");
    if (!(cluster_width > 0.0) || cluster_width * static_cast<double>(n_clusters) > 2.0)
        throw ConfigError("cluster_width", 0, "need 0 < cluster_width and cluster_width * n_clusters <= 2");
    if (!(theta_max_deg > 0.0 && theta_max_deg <= 90.0))
        throw ConfigError("theta_max_deg", 0, "must lie in (0, 90]");
    if (!(alpha > 0.0))
        throw ConfigError("alpha", 0, "must be positive");
    if (!(th_rel > 0.0 && th_rel < 1.0))
        throw ConfigError("th_rel", 0, "must lie in (0, 1)");
    if (!(p0 >= 0.0))
        throw ConfigError("p0", 0, "must be >= 0");
    if (!(epsilon_factor >= 0.0 && epsilon_factor < 1.0))
        throw ConfigError("epsilon_factor", 0, "must lie in [0, 1)");
    if (!(ul_noise_var >= 0.0))
        throw ConfigError("ul_noise_var", 0, "must be >= 0");
}

ExperimentConfig parse_config_text(const std::string &text)
{
    static const std::set<std::string> required{"M", "K", "T", "tdl_list", "snr_db_list", "n_trials", "seed"};
    const auto table = setters();

    ExperimentConfig cfg;
    std::map<std::string, std::size_t> seen;
    std::stringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(std::string_view(raw).substr(0, hash));
        if (body.empty())
            continue;
        const auto sep = body.find_first_of(":=");
        if (sep == std::string::npos)
            throw ConfigError("", line, "expected 'key: value'");
        Entry e{trim(std::string_view(body).substr(0, sep)), trim(std::string_view(body).substr(sep + 1)), line};
        if (e.key.empty())
            throw ConfigError("", line, "missing key");
        const auto it = table.find(e.key);
        if (it == table.end())
            throw ConfigError(e.key, line, "unknown key");
        if (seen.count(e.key))
            throw ConfigError(e.key, line, "duplicate key (first on line " + std::to_string(seen[e.key]) + ")");
        if (e.value.empty())
            throw ConfigError(e.key, line, "missing value");
        seen[e.key] = line;
        it->second(cfg, e);
    }
    for (const auto &k : required)
        if (!seen.count(k))
            throw ConfigError(k, 0, "required key missing");
    try
    {
        cfg.validate();
    }
    catch (const ConfigError &err)
    {
        const auto at = seen.find(err.key());
        if (at == seen.end())
            throw;
        // re-raise with the line where the offending key was set
        const std::string msg = err.what();
        throw ConfigError(err.key(), at->second, msg.substr(msg.find(": ") + 2));
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", 0, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_text(const ExperimentConfig &c)
{
    std::ostringstream o;
    o.precision(17);
    auto list = [&](const auto &v) {
        o << '[';
        for (std::size_t i = 0; i < v.size(); ++i)
            o << (i ? ", " : "") << v[i];
        o << "]\n";
    };
    o << "M: " << c.M << "\nK: " << c.K << "\nT: " << c.T << "\ntdl_list: ";
    list(c.tdl_list);
    o << "snr_db_list: ";
    list(c.snr_db_list);
    o << "n_trials: " << c.n_trials << "\nseed: " << c.seed << "\nn_ul: " << c.n_ul
      << "\ngrid_factor: " << c.grid_factor << "\ntheta_max_deg: " << c.theta_max_deg << "\nalpha: " << c.alpha
      << "\nn_clusters: " << c.n_clusters << "\nclusters_per_user: " << c.clusters_per_user
      << "\ncluster_width: " << c.cluster_width << "\nth_rel: " << c.th_rel << "\np0: " << c.p0
      << "\nepsilon_factor: " << c.epsilon_factor << "\nul_noise_var: " << c.ul_noise_var
      << "\nexact_covariance: " << (c.exact_covariance ? "true" : "false")
      << "\ngenie_prior: " << (c.genie_prior ? "true" : "false")
      << "\ncovariance_prior: " << (c.covariance_prior ? "true" : "false")
      << "\nnormalize_asf: " << (c.normalize_asf ? "true" : "false") << '\n';
    if (!c.output_path.empty())
        o << "output_path: \"" << c.output_path << "\"\n";
    return o.str();
}

} // namespace acs
