// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

// acs command line: simulate, extrapolate, sparsify, validate.
//
// Exit codes: 0 success, 1 validation or run failure, 2 bad config or arguments.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "acs/channel_model.hpp"
#include "acs/config.hpp"
#include "acs/covariance.hpp"
#include "acs/evaluation.hpp"
#include "acs/rng.hpp"
#include "acs/sparsifier.hpp"
#include "acs/validation.hpp"

namespace
{

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kBadInput = 2;

void write_file(const std::string &path, const std::string &text)
{
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty())
        std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs
{
    std::string config;
    std::string output;
    std::size_t threads = 1;
};

int cmd_simulate(const SimulateArgs &a)
{
    const acs::ExperimentConfig cfg = acs::parse_config(a.config);
    std::string prefix = a.output.empty() ? cfg.output_path : a.output;
    if (prefix.empty())
        prefix = std::filesystem::path(a.config).replace_extension("").string();

    const auto result = acs::run_experiment(cfg, acs::RunOptions{a.threads});
    write_file(prefix + ".csv", acs::records_to_csv(result.records));
    write_file(prefix + ".json", acs::summary_to_json(cfg, result));

    std::printf("%6s %8s %6s %10s %10s %10s %10s\n", "Tdl", "snr_db", "count", "served", "matching", "err_norm",
                "rate");
    for (const auto &g : acs::summarize(cfg, result.records))
        std::printf("%6zu %8.2f %6zu %10.3f %10.3f %10.4g %10.4f\n", g.t_dl, g.snr_db, g.count, g.served_mean,
                    g.matching_mean, g.err_mean, g.rate_mean);
    for (const auto &f : result.failures)
        std::fprintf(stderr, "trial %zu failed: %s\n", f.trial, f.message.c_str());
    std::printf("wrote %s.csv and %s.json\n", prefix.c_str(), prefix.c_str());
    return kOk;
}

// ---- extrapolate ------------------------------------------------------------

struct ExtrapolateArgs
{
    std::size_t antennas = 64;
    double alpha = 2140.0 / 1950.0;
    double theta_max_deg = 60.0;
    std::vector<std::string> clusters; // "a:b" in xi-coordinates
    std::uint64_t seed = 1;
    std::size_t n_ul = 0; // 0 uses the exact UL covariance
    double ul_noise_var = 0.01;
    std::size_t grid_factor = 4;
    std::string output = "extrapolate";
};

std::pair<double, double> parse_span(const std::string &s)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw acs::InvalidArgument("cluster '" + s + "' is not of the form a:b");
    try
    {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    }
    catch (const std::logic_error &)
    {
        throw acs::InvalidArgument("cluster '" + s + "' is not numeric");
    }
}

int cmd_extrapolate(const ExtrapolateArgs &a)
{
    acs::ArrayConfig ac;
    ac.antennas = a.antennas;
    ac.alpha = a.alpha;
    ac.theta_max = a.theta_max_deg * std::numbers::pi / 180.0;
    ac.validate();

    acs::AngularScatteringFunction asf;
    if (!a.clusters.empty())
    {
        std::vector<std::pair<double, double>> spans;
        for (const auto &c : a.clusters)
            spans.push_back(parse_span(c));
        asf = acs::AngularScatteringFunction::union_of(spans, true);
    }
    else
    {
        acs::ScenarioParams sp;
        sp.users = 1;
        sp.seed = a.seed;
        asf = acs::make_scenario(sp).users.front().asf;
    }

    acs::ToeplitzCovariance c_ul;
    if (a.n_ul == 0)
        c_ul = acs::true_covariance(ac, asf, acs::Band::Uplink);
    else
    {
        auto hs = acs::RandomStream::derive(a.seed, acs::Purpose::UplinkChannel, {0});
        auto ns = acs::RandomStream::derive(a.seed, acs::Purpose::UplinkNoise, {0});
        acs::ComplexMatrix y = acs::sample_channels(ac, asf, acs::Band::Uplink, a.n_ul, hs);
        const double sd = std::sqrt(a.ul_noise_var);
        for (auto &v : y.data())
            v += sd * ns.complex_normal();
        c_ul = acs::project_toeplitz_psd(acs::sample_covariance(y, a.ul_noise_var)).covariance;
    }
    const auto est = acs::estimate_asf(c_ul, ac, a.grid_factor * a.antennas);
    const auto c_hat = acs::extrapolate_dl(est, ac);
    const auto c_true = acs::true_covariance(ac, asf, acs::Band::Downlink);

    write_file(a.output + "_ul.csv", acs::covariance_to_csv(c_ul));
    write_file(a.output + "_dl.csv", acs::covariance_to_csv(c_hat));
    write_file(a.output + "_dl_true.csv", acs::covariance_to_csv(c_true));
    write_file(a.output + "_spectrum.csv", acs::spectrum_to_csv(acs::circulant_eigenvalues(c_hat)));

    const auto truth = c_true.matrix();
    std::printf("relative DL error %.6g, NNLS residual %.3g\n",
                acs::frobenius_distance(c_hat.matrix(), truth) / acs::frobenius_norm(truth), est.residual_norm);
    std::printf("wrote %s_{ul,dl,dl_true,spectrum}.csv\n", a.output.c_str());
    return kOk;
}

// ---- sparsify ---------------------------------------------------------------

struct SparsifyArgs
{
    std::string spectra;
    std::size_t t_dl = 0;
    double p0 = 0.0;
    double th_rel = 0.01;
    double epsilon_factor = 0.5;
    std::string output;
};

// One user per line, comma or whitespace separated beam powers; '#' comments.
std::vector<acs::RVec> read_spectra(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw acs::InvalidArgument("cannot open spectra file " + path);
    std::vector<acs::RVec> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
    {
        ++n;
        line = line.substr(0, line.find('#'));
        for (auto &ch : line)
            if (ch == ',')
                ch = ' ';
        std::istringstream ss(line);
        acs::RVec row;
        std::string tok;
        while (ss >> tok)
        {
            try
            {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size())
                    throw std::invalid_argument(tok);
            }
            catch (const std::logic_error &)
            {
                throw acs::InvalidArgument(path + " line " + std::to_string(n) + ": bad number '" + tok + "'");
            }
        }
        if (!row.empty())
            out.push_back(std::move(row));
    }
    if (out.empty())
        throw acs::InvalidArgument(path + ": no spectra");
    return out;
}

int cmd_sparsify(const SparsifyArgs &a)
{
    const auto graph = acs::build_beam_graph(read_spectra(a.spectra), a.th_rel);
    acs::SparsifyOptions so;
    so.epsilon_factor = a.epsilon_factor;
    const auto plan = acs::solve_sparsification(graph, a.t_dl, a.p0, so);
    const std::string text = acs::plan_to_json(plan);
    if (a.output.empty())
        std::cout << text << '\n';
    else
        write_file(a.output, text + "\n");
    std::fprintf(stderr, "%zu beams, %zu users, matching %zu, %zu nodes\n", plan.beams.size(), plan.users.size(),
                 plan.matching_size, plan.node_count);
    return kOk;
}

// ---- validate ---------------------------------------------------------------

struct ValidateArgs
{
    std::vector<std::string> suites;
    bool inject_fault = false;
};

int cmd_validate(const ValidateArgs &a)
{
    const auto &names = a.suites.empty() ? acs::suite_names() : a.suites;
    acs::ValidationOptions opt;
    opt.inject_fault = a.inject_fault;
    std::vector<acs::SuiteResult> results;
    bool ok = true;
    for (const auto &n : names)
    {
        results.push_back(acs::run_suite(n, opt));
        ok = ok && results.back().passed;
    }
    std::cout << acs::format_suite_table(results);
    std::cout << (ok ? "all suites passed\n" : "validation FAILED\n");
    return ok ? kOk : kFailure;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"FDD massive MIMO covariance extrapolation and active channel sparsification"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *s = app.add_subcommand("simulate", "Monte Carlo grid over T_dl and SNR; writes CSV and JSON");
    s->add_option("config", sim.config, "experiment config file")->required();
    s->add_option("-o,--output", sim.output, "output prefix (default: output_path from the config)");
    s->add_option("-t,--threads", sim.threads, "worker threads")->check(CLI::PositiveNumber);

    ExtrapolateArgs ex;
    auto *e = app.add_subcommand("extrapolate", "single-user UL to DL covariance pipeline");
    e->add_option("-M,--antennas", ex.antennas, "array size");
    e->add_option("--alpha", ex.alpha, "f_dl / f_ul");
    e->add_option("--theta-max", ex.theta_max_deg, "angular range in degrees");
    e->add_option("--cluster", ex.clusters, "scattering interval a:b in xi-coordinates (repeatable)");
    e->add_option("--seed", ex.seed, "seed for the random user and UL snapshots");
    e->add_option("--n-ul", ex.n_ul, "UL snapshots; 0 uses the exact UL covariance");
    e->add_option("--ul-noise", ex.ul_noise_var, "UL noise variance");
    e->add_option("--grid-factor", ex.grid_factor, "NNLS grid size / M");
    e->add_option("-o,--output", ex.output, "output prefix");

    SparsifyArgs sp;
    auto *p = app.add_subcommand("sparsify", "beam/user selection plan from a spectra file");
    p->add_option("spectra", sp.spectra, "one user per line, M beam powers")->required();
    p->add_option("--tdl", sp.t_dl, "DL pilot dimension")->required();
    p->add_option("--p0", sp.p0, "minimum effective channel power");
    p->add_option("--th-rel", sp.th_rel, "edge threshold relative to the largest beam power");
    p->add_option("--epsilon-factor", sp.epsilon_factor, "beam-count regularizer times M");
    p->add_option("-o,--output", sp.output, "plan JSON path (default: stdout)");

    ValidateArgs va;
    auto *v = app.add_subcommand("validate", "run the oracle suites");
    v->add_option("--suite", va.suites, "suite to run (repeatable)")
        ->check(CLI::IsMember(acs::suite_names()));
    v->add_flag("--inject-fault", va.inject_fault)->group("");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &err)
    {
        const int code = app.exit(err);
        return code == 0 ? kOk : kBadInput;
    }

    try
    {
        if (*s)
            return cmd_simulate(sim);
        if (*e)
            return cmd_extrapolate(ex);
        if (*p)
            return cmd_sparsify(sp);
        return cmd_validate(va);
    }
    catch (const acs::ConfigError &err)
    {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return kBadInput;
    }
    catch (const acs::InvalidArgument &err)
    {
        std::fprintf(stderr, "invalid input: %s\n", err.what());
        return kBadInput;
    }
    catch (const std::exception &err)
    {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kFailure;
    }
}
