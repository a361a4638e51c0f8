// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "acs/channel_model.hpp"
#include "acs/covariance.hpp"
#include "acs/errors.hpp"
#include "acs/opt/matching.hpp"
#include "acs/opt/nnls.hpp"
#include "acs/probing.hpp"
#include "acs/rng.hpp"
#include "acs/sparsifier.hpp"

namespace acs
{

namespace
{

constexpr std::uint64_t kValidationSeed = 0x5eed'a11d'0000'0001ull;

RandomStream case_stream(std::uint64_t suite, std::uint64_t index)
{
    return RandomStream::derive(kValidationSeed, Purpose::Test, {suite, index});
}

// Collects per-case metrics. A case fails when its metric exceeds the
// tolerance; the fault switch makes every comparison fail.
class Tally
{
public:
    Tally(SuiteResult &r, double tolerance, const ValidationOptions &opt) : r_(r)
    {
        r_.tolerance = opt.inject_fault ? -std::numeric_limits<double>::infinity() : tolerance;
        r_.worst = -std::numeric_limits<double>::infinity();
    }

    void add(double metric)
    {
        ++r_.cases;
        r_.worst = std::max(r_.worst, metric);
        if (!(metric <= r_.tolerance))
            ++r_.failures;
    }

private:
    SuiteResult &r_;
};

ComplexMatrix random_hermitian(std::size_t n, RandomStream &s)
{
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        a(i, i) = s.normal();
        for (std::size_t j = i + 1; j < n; ++j)
        {
            a(i, j) = s.complex_normal();
            a(j, i) = std::conj(a(i, j));
        }
    }
    return a;
}

// Toeplitz PSD matrices are exactly the nonnegative combinations of array
// responses; a few random atoms plus a white floor sample the cone.
ComplexMatrix random_toeplitz_psd(std::size_t m, RandomStream &s)
{
    CVec c(m, 0.0);
    const std::size_t atoms = 1 + s.uniform_int(4);
    for (std::size_t k = 0; k < atoms; ++k)
    {
        const double xi = 2.0 * s.uniform() - 1.0;
        const double w = s.uniform();
        for (std::size_t d = 0; d < m; ++d)
            c[d] += w * std::polar(1.0, std::numbers::pi * static_cast<double>(d) * xi);
    }
    c[0] = c[0].real() + 0.1 * s.uniform();
    return toeplitz_from_column(c);
}

// ---- suites ----------------------------------------------------------------

void suite_matching(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 0.0, opt);
    for (std::uint64_t t = 0; t < 1000; ++t)
    {
        auto s = case_stream(1, t);
        ComplexMatrix a(8, 8);
        opt::MatchingInstance g{8, 8, {}};
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
                if (s.uniform() < 0.5)
                {
                    a(i, j) = s.complex_normal();
                    g.edges.emplace_back(i, j);
                }
        const double rank = static_cast<double>(numerical_rank(a));
        const double matching = static_cast<double>(opt::max_matching(g).size);
        tally.add(std::abs(rank - matching));
    }
}

BeamGraph random_small_graph(RandomStream &s)
{
    const std::size_t beams = 1 + s.uniform_int(7);
    const std::size_t users = 1 + s.uniform_int(5);
    RealMatrix w(beams, users);
    std::vector<std::uint8_t> adj(beams * users, 0);
    for (std::size_t m = 0; m < beams; ++m)
        for (std::size_t k = 0; k < users; ++k)
        {
            w(m, k) = 0.05 + s.uniform();
            adj[m * users + k] = s.uniform() < 0.5 ? 1 : 0;
        }
    return make_beam_graph(w, adj);
}

double median_edge_weight(const BeamGraph &g)
{
    RVec w;
    for (std::size_t m = 0; m < g.beams; ++m)
        for (std::size_t k = 0; k < g.users; ++k)
            if (g.edge(m, k))
                w.push_back(g.weights(m, k));
    if (w.empty())
        return 0.0;
    std::sort(w.begin(), w.end());
    return w[w.size() / 2];
}

double distance_to_binary(double v) { return std::min(std::abs(v), std::abs(v - 1.0)); }

// 200 random graphs: MILP versus subgraph enumeration. The node observer
// records how far z is from {0, 1} at every node LP whose x and y came out
// binary, and the final solution is checked the same way.
struct SparsifyOutcome
{
    std::vector<double> size_gap;
    std::vector<double> z_distance;
    std::size_t integral_nodes = 0;
    std::size_t total_nodes = 0;
};

SparsifyOutcome run_sparsify_cases()
{
    SparsifyOutcome out;
    for (std::uint64_t t = 0; t < 200; ++t)
    {
        auto s = case_stream(2, t);
        const auto g = random_small_graph(s);
        const std::size_t t_dl = 1 + s.uniform_int(4);
        const double p0 = s.uniform() < 0.5 ? 0.0 : median_edge_weight(g);

        double worst_z = 0.0;
        SparsifyOptions so;
        so.node_observer = [&](const opt::NodeInfo &n, const SparsificationMilp &f) {
            ++out.total_nodes;
            if (n.status != opt::LpStatus::Optimal || !n.integral)
                return;
            ++out.integral_nodes;
            for (std::size_t i = 0; i < f.z_edges.size(); ++i)
                worst_z = std::max(worst_z, distance_to_binary((*n.solution)[f.z(i)]));
        };
        const auto plan = solve_sparsification(g, t_dl, p0, so);
        const auto brute = brute_force_sparsify(g, t_dl, p0);
        out.size_gap.push_back(std::abs(static_cast<double>(plan.matching_size) -
                                        static_cast<double>(brute.matching_size)));
        out.z_distance.push_back(worst_z);
    }
    return out;
}

void suite_sparsify(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 0.0, opt);
    const auto out = run_sparsify_cases();
    for (double gap : out.size_gap)
        tally.add(gap);
    r.metrics.emplace_back("nodes", static_cast<double>(out.total_nodes));
}

void suite_integrality(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 1e-6, opt);
    const auto out = run_sparsify_cases();
    for (double d : out.z_distance)
        tally.add(d);
    r.metrics.emplace_back("binary_nodes", static_cast<double>(out.integral_nodes));
    r.metrics.emplace_back("nodes", static_cast<double>(out.total_nodes));
}

EffectiveChannelModel random_support(std::size_t m_prime, std::size_t s_count, double n0, RandomStream &s)
{
    std::vector<std::size_t> idx(m_prime);
    for (std::size_t i = 0; i < m_prime; ++i)
        idx[i] = i;
    for (std::size_t i = 0; i < s_count; ++i)
        std::swap(idx[i], idx[i + s.uniform_int(m_prime - i)]);
    EffectiveChannelModel m;
    m.positions.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s_count));
    std::sort(m.positions.begin(), m.positions.end());
    for (std::size_t i = 0; i < s_count; ++i)
        m.variances.push_back(0.5 + s.uniform());
    m.n0 = n0;
    return m;
}

// Whitened error trace of mmse_effective, averaged over draws.
double empirical_trace(const PilotMatrix &pilot, const EffectiveChannelModel &model, std::size_t draws,
                       RandomStream &s)
{
    const std::size_t mp = pilot.beams();
    std::vector<std::size_t> all(mp);
    for (std::size_t i = 0; i < mp; ++i)
        all[i] = i;
    const SparsifyingPrecoder identity_beams(all, mp);
    const auto f = dft_matrix(mp);
    double total = 0.0;
    for (std::size_t d = 0; d < draws; ++d)
    {
        CVec heff(mp, 0.0);
        for (std::size_t i = 0; i < model.positions.size(); ++i)
            heff[model.positions[i]] = std::sqrt(model.variances[i]) * s.complex_normal();
        const CVec y = dl_observe(pilot, identity_beams, matvec(f, heff), model.n0, s);
        const CVec est = mmse_effective(y, pilot, model);
        for (std::size_t i = 0; i < model.positions.size(); ++i)
            total += std::norm(est[model.positions[i]] - heff[model.positions[i]]) / model.variances[i];
    }
    return total / static_cast<double>(draws);
}

// Metric is the relative deviation; (b) is scaled so its 1e-3 absolute bound
// maps onto the shared 15% tolerance.
void suite_stability(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 0.15, opt);
    constexpr std::size_t kM = 32, kS = 8;
    constexpr double kPower = 1000.0;

    // (a) T_dl = s: trace drops 10x per decade of N0
    {
        auto s = case_stream(4, 0);
        const auto pilot = make_pilot(8, kM, kPower, s.next_u64());
        auto model = random_support(kM, kS, 1e-2, s);
        RVec trace;
        for (double n0 : {1e-2, 1e-3, 1e-4})
        {
            model.n0 = n0;
            trace.push_back(error_trace_oracle(pilot, model));
        }
        for (std::size_t i = 0; i + 1 < trace.size(); ++i)
        {
            const double ratio = trace[i] / trace[i + 1];
            r.metrics.emplace_back("decade_ratio_" + std::to_string(i), ratio);
            tally.add(std::abs(ratio / 10.0 - 1.0));
        }
    }
    // (b) T_dl < s: floor at s - T_dl
    {
        auto s = case_stream(4, 1);
        const auto pilot = make_pilot(6, kM, kPower, s.next_u64());
        const auto model = random_support(kM, kS, 1e-8, s);
        const double v = error_trace_oracle(pilot, model);
        r.metrics.emplace_back("floor", v);
        tally.add(std::abs(v - 2.0) / 1e-3 * 0.15);
    }
    // (c) empirical MMSE error versus the formula, within 3%
    for (std::uint64_t c = 0; c < 2; ++c)
    {
        auto s = case_stream(4, 2 + c);
        const std::size_t t_dl = c == 0 ? 8 : 6;
        const auto pilot = make_pilot(t_dl, kM, c == 0 ? 1.0 : kPower, s.next_u64());
        const auto model = random_support(kM, kS, c == 0 ? 1.0 : 1e-2, s);
        const double oracle = error_trace_oracle(pilot, model);
        const double emp = empirical_trace(pilot, model, 2000, s);
        r.metrics.emplace_back("empirical_over_formula_" + std::to_string(c), emp / oracle);
        tally.add(std::abs(emp / oracle - 1.0) / 0.03 * 0.15);
    }
}

RVec sorted_eigenvalues(const ComplexMatrix &a)
{
    RVec ev = hermitian_eig_tridiagonal(a).eigenvalues;
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Metric 0 when the circulant spectrum error strictly decreases with M, 1 otherwise.
void suite_szego(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 0.0, opt);
    const auto asf = AngularScatteringFunction::union_of({{-0.5, -0.3}, {0.2, 0.4}}, true);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t m : {16u, 32u, 64u, 128u})
    {
        ArrayConfig cfg;
        cfg.antennas = m;
        const auto cov = true_covariance(cfg, asf, Band::Downlink);
        RVec circ = circulant_eigenvalues(cov);
        std::sort(circ.begin(), circ.end());
        const RVec exact = sorted_eigenvalues(cov.matrix());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            num += (circ[i] - exact[i]) * (circ[i] - exact[i]);
            den += exact[i] * exact[i];
        }
        const double err = std::sqrt(num / den);
        r.metrics.emplace_back("M" + std::to_string(m), err);
        if (std::isfinite(prev))
            tally.add(err < prev ? 0.0 : 1.0);
        prev = err;
    }
}

// Metric: projection distance minus the best random cone sample distance.
// Outputs that stopped at the iteration cap are scored as returned.
void suite_projection(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 1e-9, opt);
    std::size_t capped = 0;
    for (std::uint64_t t = 0; t < 50; ++t)
    {
        auto s = case_stream(6, t);
        const auto a = random_hermitian(8, s);
        const auto proj = project_toeplitz_psd(a);
        const double d = frobenius_distance(proj.covariance.matrix(), a);
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 10000; ++k)
            best = std::min(best, frobenius_distance(random_toeplitz_psd(8, s), a));
        capped += proj.status == ProjectionStatus::Converged ? 0 : 1;
        tally.add(d - best);
    }
    r.metrics.emplace_back("iteration_cap_hits", static_cast<double>(capped));
}

// Active-set enumeration: least squares on every column subset, keep the best
// nonnegative one.
double nnls_enumeration_optimum(const Eigen::MatrixXd &a, const Eigen::VectorXd &b)
{
    const auto n = a.cols();
    double best = b.norm();
    for (unsigned mask = 1; mask < (1u << n); ++mask)
    {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index j = 0; j < n; ++j)
            if (mask & (1u << j))
                cols.push_back(j);
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
        const Eigen::VectorXd x = sub.colPivHouseholderQr().solve(b);
        if (x.minCoeff() < 0.0)
            continue;
        best = std::min(best, (sub * x - b).norm());
    }
    return best;
}

void suite_nnls(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 1e-8, opt);
    for (std::uint64_t t = 0; t < 100; ++t)
    {
        auto s = case_stream(7, t);
        RealMatrix a(6, 4);
        RVec b(6);
        Eigen::MatrixXd ea(6, 4);
        Eigen::VectorXd eb(6);
        for (std::size_t i = 0; i < 6; ++i)
        {
            for (std::size_t j = 0; j < 4; ++j)
                ea(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j) = s.normal();
            eb(static_cast<Eigen::Index>(i)) = b[i] = s.normal();
        }
        const auto res = opt::nnls(a, b);
        const double neg = -std::min(0.0, *std::min_element(res.solution.begin(), res.solution.end()));
        tally.add(std::max(neg, std::abs(res.residual_norm - nnls_enumeration_optimum(ea, eb))));
    }
}

// Exact UL covariance of a two-cluster ASF, extrapolated to the DL band.
void suite_extrapolation(SuiteResult &r, const ValidationOptions &opt)
{
    Tally tally(r, 0.05, opt);
    ArrayConfig cfg;
    cfg.antennas = 64;
    cfg.alpha = 1.1;
    const auto asf = AngularScatteringFunction::union_of({{-0.5, -0.3}, {0.2, 0.4}}, true);
    const auto est = estimate_asf(true_covariance(cfg, asf, Band::Uplink), cfg, 8 * cfg.antennas);
    const auto truth = true_covariance(cfg, asf, Band::Downlink).matrix();
    const auto dl = extrapolate_dl(est, cfg).matrix();
    tally.add(frobenius_distance(dl, truth) / frobenius_norm(truth));
}

struct SuiteEntry
{
    const char *title;
    std::function<void(SuiteResult &, const ValidationOptions &)> run;
};

const std::map<std::string, SuiteEntry> &registry()
{
    static const std::map<std::string, SuiteEntry> table{
        {"matching", {"rank equals max matching (1000 masked 8x8)", suite_matching}},
        {"sparsify", {"MILP matching equals enumeration (200 graphs)", suite_sparsify}},
        {"integrality", {"matching variables binary at binary x, y", suite_integrality}},
        {"stability", {"MMSE error trace: slope, floor, empirical", suite_stability}},
        {"szego", {"circulant spectrum error decreasing in M", suite_szego}},
        {"projection", {"Toeplitz PSD projection beats cone samples", suite_projection}},
        {"nnls", {"NNLS equals active-set enumeration (100 6x4)", suite_nnls}},
        {"extrapolation", {"DL covariance extrapolation error <= 5%", suite_extrapolation}},
    };
    return table;
}

} // namespace

const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"matching", "sparsify", "integrality", "stability",
                                                "szego", "projection", "nnls", "extrapolation"};
    return names;
}

SuiteResult run_suite(const std::string &name, const ValidationOptions &options)
{
    const auto it = registry().find(name);
    if (it == registry().end())
        throw InvalidArgument("unknown validation suite '" + name + "'");
    SuiteResult r;
    r.name = name;
    r.title = it->second.title;
    const auto start = std::chrono::steady_clock::now();
    try
    {
        it->second.run(r, options);
    }
    catch (const std::exception &e)
    {
        r.metrics.emplace_back(std::string("exception: ") + e.what(), 0.0);
        ++r.failures;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = r.failures == 0 && r.cases > 0;
    return r;
}

std::string format_suite_table(const std::vector<SuiteResult> &results)
{
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-6s %6s %6s %12s %12s %8s  %s\n", "suite", "result", "cases", "fail",
                  "worst", "tolerance", "seconds", "check");
    out += line;
    for (const auto &r : results)
    {
        std::snprintf(line, sizeof line, "%-14s %-6s %6zu %6zu %12.4g %12.4g %8.2f  %s\n", r.name.c_str(),
                      r.passed ? "PASS" : "FAIL", r.cases, r.failures, r.worst, r.tolerance, r.seconds,
                      r.title.c_str());
        out += line;
        for (const auto &[key, value] : r.metrics)
        {
            std::snprintf(line, sizeof line, "%-14s   %s = %.6g\n", "", key.c_str(), value);
            out += line;
        }
    }
    return out;
}

} // namespace acs
