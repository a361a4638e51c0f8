// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "acs/covariance.hpp"

namespace acs
{

namespace
{

ComplexMatrix columns_of(const std::vector<CVec> &vs, const std::vector<std::size_t> &idx)
{
    const std::size_t rows = vs.at(idx.front()).size();
    ComplexMatrix h(rows, idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c)
        h.set_col(c, vs[idx[c]]);
    return h;
}

ComplexMatrix gram_inverse(const ComplexMatrix &h, double ridge)
{
    ComplexMatrix g = hermitian_part(matmul_adj_left(h, h));
    if (ridge > 0.0)
    {
        const double shift = ridge * std::max(trace(g).real() / static_cast<double>(g.rows()), 1e-300);
        for (std::size_t i = 0; i < g.rows(); ++i)
            g(i, i) += shift;
    }
    return hpd_solve(g, ComplexMatrix::identity(g.rows()));
}

} // namespace

ZfPrecoder zf_precoder(const ComplexMatrix &h, double p_dl)
{
    const std::size_t k = h.cols();
    if (k == 0 || k > h.rows())
        throw InvalidArgument("zf_precoder: need 1 <= K'' <= M'");
    if (!(p_dl > 0.0))
        throw InvalidArgument("zf_precoder: P_dl must be positive");
    if (numerical_rank(h) < k)
        throw NumericalFailure("zf_precoder: estimated channel matrix is rank deficient");
    const ComplexMatrix ginv = gram_inverse(h, 0.0);

    ZfPrecoder zf;
    zf.v = matmul(h, ginv); // pseudoinverse^H columns
    zf.j.resize(k);
    zf.p.assign(k, p_dl / static_cast<double>(k));
    for (std::size_t c = 0; c < k; ++c)
    {
        double n2 = 0.0;
        for (std::size_t r = 0; r < h.rows(); ++r)
            n2 += std::norm(zf.v(r, c));
        zf.j[c] = 1.0 / n2; // 1 / [(H^H H)^-1]_cc
        const double s = 1.0 / std::sqrt(n2);
        for (std::size_t r = 0; r < h.rows(); ++r)
            zf.v(r, c) *= s;
    }
    return zf;
}

ComplexMatrix effective_gains(const std::vector<CVec> &h_true, const SparsifyingPrecoder &precoder,
                              const ZfPrecoder &zf)
{
    const std::size_t k = zf.streams();
    if (h_true.size() != k)
        throw InvalidArgument("effective_gains: one channel per stream");
    if (zf.v.rows() != precoder.rows())
        throw InvalidArgument("effective_gains: precoder and ZF dimensions differ");
    ComplexMatrix b(k, k);
    for (std::size_t r = 0; r < k; ++r)
    {
        const CVec heff = precoder.apply(h_true[r]);
        for (std::size_t c = 0; c < k; ++c)
        {
            cx acc = 0.0;
            for (std::size_t i = 0; i < heff.size(); ++i)
                acc += std::conj(heff[i]) * zf.v(i, c);
            b(r, c) = acc * std::sqrt(zf.p[c]);
        }
    }
    return b;
}

double sum_rate(const ComplexMatrix &b, std::size_t t_dl, std::size_t t)
{
    if (t == 0 || t_dl > t)
        throw InvalidArgument("sum_rate: need T_dl <= T and T >= 1");
    if (b.rows() != b.cols())
        throw InvalidArgument("sum_rate: b must be square");
    double total = 0.0;
    for (std::size_t k = 0; k < b.rows(); ++k)
    {
        double interference = 0.0;
        for (std::size_t c = 0; c < b.cols(); ++c)
            if (c != k)
                interference += std::norm(b(k, c));
        total += std::log2(1.0 + std::norm(b(k, k)) / (1.0 + interference));
    }
    return (1.0 - static_cast<double>(t_dl) / static_cast<double>(t)) * total;
}

double estimated_zf_rate(const std::vector<CVec> &candidates, const std::vector<std::size_t> &subset, double p_dl,
                         std::size_t t_dl, std::size_t t)
{
    if (subset.empty())
        return 0.0;
    ZfPrecoder zf;
    try
    {
        zf = zf_precoder(columns_of(candidates, subset), p_dl);
    }
    catch (const NumericalFailure &)
    {
        return -std::numeric_limits<double>::infinity();
    }
    catch (const InvalidArgument &)
    {
        return -std::numeric_limits<double>::infinity(); // more users than beams
    }
    double r = 0.0;
    for (std::size_t k = 0; k < zf.streams(); ++k)
        r += std::log2(1.0 + zf.j[k] * zf.p[k]);
    return (1.0 - static_cast<double>(t_dl) / static_cast<double>(t)) * r;
}

std::vector<std::size_t> greedy_user_selection(const std::vector<CVec> &candidates, double p_dl, std::size_t t_dl,
                                               std::size_t t)
{
    if (t == 0 || t_dl > t)
        throw InvalidArgument("greedy_user_selection: need T_dl <= T");
    if (candidates.empty())
        return {};
    // The pre-log factor is a positive constant (or zero at T_dl = T), so the
    // choices are made on the bare sum of logs.
    std::vector<std::size_t> chosen;
    std::vector<std::uint8_t> used(candidates.size(), 0);
    double current = 0.0;
    while (true)
    {
        double best = current;
        std::size_t pick = candidates.size();
        for (std::size_t c = 0; c < candidates.size(); ++c)
        {
            if (used[c])
                continue;
            auto trial = chosen;
            trial.push_back(c);
            const double r = estimated_zf_rate(candidates, trial, p_dl, 0, 1);
            if (r > best)
            {
                best = r;
                pick = c;
            }
        }
        if (pick == candidates.size())
            break;
        chosen.push_back(pick);
        used[pick] = 1;
        current = best;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

ZfPrecoder zf_with_retry(const ComplexMatrix &h, double p_dl, std::vector<std::size_t> &kept)
{
    kept.resize(h.cols());
    for (std::size_t i = 0; i < kept.size(); ++i)
        kept[i] = i;
    ComplexMatrix cur = h;
    for (std::size_t attempt = 0; attempt <= h.cols() && !kept.empty(); ++attempt)
    {
        try
        {
            return zf_precoder(cur, p_dl);
        }
        catch (const NumericalFailure &)
        {
            const ComplexMatrix ginv = gram_inverse(cur, 1e-10);
            std::size_t worst = 0;
            for (std::size_t c = 1; c < cur.cols(); ++c)
                if (ginv(c, c).real() > ginv(worst, worst).real()) // smallest J
                    worst = c;
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
            if (kept.empty())
                break;
            ComplexMatrix next(h.rows(), kept.size());
            for (std::size_t c = 0; c < kept.size(); ++c)
                next.set_col(c, h.col(kept[c]));
            cur = std::move(next);
        }
    }
    kept.clear();
    return {};
}

double normalized_error(const ComplexMatrix &h, const ComplexMatrix &h_hat)
{
    if (h.rows() != h_hat.rows() || h.cols() != h_hat.cols())
        throw InvalidArgument("normalized_error: shape mismatch");
    const double n = frobenius_norm(h);
    if (n == 0.0)
        throw InvalidArgument("normalized_error: reference channel is zero");
    const double d = frobenius_distance(h, h_hat);
    return (d * d) / (n * n);
}

// ---- driver ----------------------------------------------------------------

namespace
{

struct UserState
{
    RVec lambda_hat;  // estimated DL spectrum
    RVec lambda_true; // spectrum of the true DL covariance
    ToeplitzCovariance c_hat; // estimated DL covariance
    ToeplitzCovariance c_true;
    CVec h;           // DL channel realization, antenna domain
};

std::vector<ExperimentRecord> run_trial(const ExperimentConfig &cfg, std::size_t trial)
{
    ArrayConfig ac;
    ac.antennas = cfg.M;
    ac.theta_max = cfg.theta_max_deg * std::numbers::pi / 180.0;
    ac.alpha = cfg.alpha;

    ScenarioParams sp;
    sp.n_clusters = cfg.n_clusters;
    sp.clusters_per_user = cfg.clusters_per_user;
    sp.cluster_width = cfg.cluster_width;
    sp.users = cfg.K;
    sp.normalize = cfg.normalize_asf;
    auto scen_stream = RandomStream::derive(cfg.seed, Purpose::Scenario, {trial});
    sp.seed = scen_stream.key();
    const Scenario scen = make_scenario(sp, scen_stream);
    const std::uint64_t trial_seed = sp.seed;

    std::vector<UserState> users(cfg.K);
    for (std::size_t k = 0; k < cfg.K; ++k)
    {
        const auto &asf = scen.users[k].asf;
        const auto c_dl = true_covariance(ac, asf, Band::Downlink);
        ToeplitzCovariance c_ul;
        if (cfg.exact_covariance)
            c_ul = true_covariance(ac, asf, Band::Uplink);
        else
        {
            auto hs = RandomStream::derive(cfg.seed, Purpose::UplinkChannel, {trial, k});
            auto ns = RandomStream::derive(cfg.seed, Purpose::UplinkNoise, {trial, k});
            ComplexMatrix y = sample_channels(ac, asf, Band::Uplink, cfg.n_ul, hs);
            const double sd = std::sqrt(cfg.ul_noise_var);
            for (auto &v : y.data())
                v += sd * ns.complex_normal();
            c_ul = project_toeplitz_psd(sample_covariance(y, cfg.ul_noise_var)).covariance;
        }
        const auto est = estimate_asf(c_ul, ac, cfg.grid_factor * cfg.M);
        users[k].c_hat = extrapolate_dl(est, ac);
        users[k].c_true = c_dl;
        users[k].lambda_hat = circulant_eigenvalues(users[k].c_hat);
        users[k].lambda_true = circulant_eigenvalues(c_dl);
        auto hs = RandomStream::derive(cfg.seed, Purpose::DownlinkChannel, {trial, k});
        users[k].h = ChannelSampler(c_dl).draw(hs);
    }

    std::vector<RVec> spectra;
    for (const auto &u : users)
        spectra.push_back(u.lambda_hat);
    const BeamGraph graph = build_beam_graph(spectra, cfg.th_rel);

    std::vector<ExperimentRecord> out;
    for (std::size_t ti = 0; ti < cfg.tdl_list.size(); ++ti)
    {
        const std::size_t t_dl = cfg.tdl_list[ti];
        SparsifyOptions so;
        so.epsilon_factor = cfg.epsilon_factor;
        const auto plan = solve_sparsification(graph, t_dl, cfg.p0, so);
        const SparsifyingPrecoder precoder = sparsifying_precoder(plan, cfg.M);
        const std::size_t mp = precoder.rows();

        // support of each probed user inside the selected beams
        std::vector<EffectiveChannelModel> models;
        for (std::size_t k : plan.users)
        {
            EffectiveChannelModel m;
            m.n0 = 1.0;
            for (std::size_t i = 0; i < mp; ++i)
                if (graph.edge(plan.beams[i], k))
                {
                    m.positions.push_back(i);
                    m.variances.push_back(cfg.genie_prior ? users[k].lambda_true[plan.beams[i]]
                                                          : users[k].lambda_hat[plan.beams[i]]);
                }
            models.push_back(std::move(m));
        }
        // B C B^H per probed user, for the covariance prior
        std::vector<ComplexMatrix> priors;
        if (cfg.covariance_prior && mp > 0)
        {
            const ComplexMatrix bm = precoder.matrix();
            for (std::size_t k : plan.users)
            {
                const auto &c = cfg.genie_prior ? users[k].c_true : users[k].c_hat;
                priors.push_back(matmul(matmul(bm, c.matrix()), adjoint(bm)));
            }
        }

        for (std::size_t si = 0; si < cfg.snr_db_list.size(); ++si)
        {
            ExperimentRecord rec;
            rec.trial = trial;
            rec.trial_seed = trial_seed;
            rec.t_dl = t_dl;
            rec.snr_db = cfg.snr_db_list[si];
            rec.matching_size = plan.matching_size;
            rec.err_norm = 1.0;
            if (plan.users.empty())
            {
                out.push_back(rec);
                continue;
            }
            const double p_dl = std::pow(10.0, rec.snr_db / 10.0);
            const auto pilot_seed = RandomStream::derive(cfg.seed, Purpose::Pilot, {trial, ti, si}).key();
            const PilotMatrix pilot = make_pilot(std::min(t_dl, mp), mp, p_dl, pilot_seed);

            std::vector<CVec> estimates;
            ComplexMatrix h_all(cfg.M, plan.users.size()), h_hat_all(cfg.M, plan.users.size());
            for (std::size_t u = 0; u < plan.users.size(); ++u)
            {
                const std::size_t k = plan.users[u];
                auto ns = RandomStream::derive(cfg.seed, Purpose::DownlinkNoise, {trial, k, ti, si});
                const CVec y = dl_observe(pilot, precoder, users[k].h, 1.0, ns);
                estimates.push_back(cfg.covariance_prior ? mmse_effective_covariance(y, pilot, priors[u], 1.0)
                                                         : mmse_effective(y, pilot, models[u]));
                h_all.set_col(u, users[k].h);
                h_hat_all.set_col(u, precoder.lift(estimates.back()));
            }
            rec.err_norm = normalized_error(h_all, h_hat_all);

            const auto chosen = greedy_user_selection(estimates, p_dl, t_dl, cfg.T);
            if (!chosen.empty())
            {
                std::vector<std::size_t> kept;
                const ZfPrecoder zf = zf_with_retry(columns_of(estimates, chosen), p_dl, kept);
                std::vector<CVec> h_served;
                for (std::size_t c : kept)
                    h_served.push_back(users[plan.users[chosen[c]]].h);
                if (!kept.empty())
                {
                    const ComplexMatrix b = effective_gains(h_served, precoder, zf);
                    rec.served = kept.size();
                    rec.sum_rate_bits = sum_rate(b, t_dl, cfg.T);
                    for (std::size_t c = 0; c < kept.size(); ++c)
                        rec.gains.push_back(std::abs(b(c, c)));
                }
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig &cfg, const RunOptions &options)
{
    ExperimentResult result;
    if (cfg.n_trials == 0)
        return result;
    cfg.validate();

    std::vector<std::vector<ExperimentRecord>> per_trial(cfg.n_trials);
    std::vector<std::string> errors(cfg.n_trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < cfg.n_trials; t = next++)
        {
            try
            {
                per_trial[t] = run_trial(cfg, t);
            }
            catch (const std::exception &e)
            {
                errors[t] = e.what();
                if (errors[t].empty())
                    errors[t] = "unknown failure";
            }
        }
    };
    const std::size_t n = std::clamp<std::size_t>(options.threads, 1, cfg.n_trials);
    if (n == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n; ++i)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    for (std::size_t t = 0; t < cfg.n_trials; ++t)
    {
        if (!errors[t].empty())
            result.failures.push_back({t, errors[t]});
        for (auto &r : per_trial[t])
            result.records.push_back(std::move(r));
    }
    return result;
}

std::string records_to_csv(const std::vector<ExperimentRecord> &records)
{
    std::string out = "trial,Tdl,snr_db,served,matching_size,err_norm,sum_rate_bits\n";
    for (const auto &r : records)
        out += std::to_string(r.trial) + ',' + std::to_string(r.t_dl) + ',' + fmt(r.snr_db) + ',' +
               std::to_string(r.served) + ',' + std::to_string(r.matching_size) + ',' + fmt(r.err_norm) + ',' +
               fmt(r.sum_rate_bits) + '\n';
    return out;
}

std::vector<GridSummary> summarize(const ExperimentConfig &cfg, const std::vector<ExperimentRecord> &records)
{
    std::vector<GridSummary> out;
    for (std::size_t t_dl : cfg.tdl_list)
        for (double snr : cfg.snr_db_list)
        {
            GridSummary g;
            g.t_dl = t_dl;
            g.snr_db = snr;
            RVec served, match, err, rate;
            for (const auto &r : records)
                if (r.t_dl == t_dl && r.snr_db == snr)
                {
                    served.push_back(static_cast<double>(r.served));
                    match.push_back(static_cast<double>(r.matching_size));
                    err.push_back(r.err_norm);
                    rate.push_back(r.sum_rate_bits);
                }
            g.count = served.size();
            auto stats = [](const RVec &v, double &mean, double &se) {
                mean = se = 0.0;
                if (v.empty())
                    return;
                for (double x : v)
                    mean += x;
                mean /= static_cast<double>(v.size());
                if (v.size() < 2)
                    return;
                double ss = 0.0;
                for (double x : v)
                    ss += (x - mean) * (x - mean);
                se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
            };
            stats(served, g.served_mean, g.served_se);
            stats(match, g.matching_mean, g.matching_se);
            stats(err, g.err_mean, g.err_se);
            stats(rate, g.rate_mean, g.rate_se);
            out.push_back(g);
        }
    return out;
}

std::string summary_to_json(const ExperimentConfig &cfg, const ExperimentResult &result)
{
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.n_trials;
    j["grid"] = nlohmann::ordered_json::array();
    for (const auto &g : summarize(cfg, result.records))
        j["grid"].push_back({{"Tdl", g.t_dl},
                             {"snr_db", g.snr_db},
                             {"count", g.count},
                             {"served_mean", g.served_mean},
                             {"served_se", g.served_se},
                             {"matching_size_mean", g.matching_mean},
                             {"matching_size_se", g.matching_se},
                             {"err_norm_mean", g.err_mean},
                             {"err_norm_se", g.err_se},
                             {"sum_rate_bits_mean", g.rate_mean},
                             {"sum_rate_bits_se", g.rate_se}});
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto &f : result.failures)
        j["failures"].push_back({{"trial", f.trial}, {"message", f.message}});
    return j.dump(2);
}

} // namespace acs
