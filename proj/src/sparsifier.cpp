// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include "acs/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace acs
{

namespace
{

constexpr double kHalf = 0.5;

bool on(double v) { return v >= kHalf; }

std::vector<std::size_t> selected(const RVec &sol, std::size_t offset, std::size_t count)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count; ++i)
        if (on(sol[offset + i]))
            out.push_back(i);
    return out;
}

void check_sets(const BeamGraph &g, std::size_t t_dl, double p0)
{
    if (t_dl == 0)
        throw InvalidArgument("sparsifier: T_dl must be >= 1");
    if (!(p0 >= 0.0) || !std::isfinite(p0))
        throw InvalidArgument("sparsifier: P0 must be finite and >= 0");
    if (g.adjacency.size() != g.beams * g.users)
        throw InvalidArgument("sparsifier: adjacency size mismatch");
}

// Selected users without a selected neighbor carry no matching edge and no
// probing support; they are dropped from the plan.
std::vector<std::size_t> connected_users(const BeamGraph &g, const std::vector<std::size_t> &beams,
                                         const std::vector<std::size_t> &users)
{
    std::vector<std::size_t> out;
    for (std::size_t k : users)
        if (std::any_of(beams.begin(), beams.end(), [&](std::size_t m) { return g.edge(m, k); }))
            out.push_back(k);
    return out;
}

void finish_plan(const BeamGraph &g, SparsificationPlan &plan)
{
    plan.users = connected_users(g, plan.beams, plan.users);
    const auto result = opt::max_matching(g.subgraph(plan.beams, plan.users));
    plan.matching = result.edges;
    plan.matching_size = result.size;
}

double user_power(const BeamGraph &g, std::size_t k, const std::vector<std::uint8_t> &beam_on)
{
    double p = 0.0;
    for (std::size_t m = 0; m < g.beams; ++m)
        if (beam_on[m] && g.edge(m, k))
            p += g.weights(m, k);
    return p;
}

std::size_t user_degree(const BeamGraph &g, std::size_t k, const std::vector<std::uint8_t> &beam_on)
{
    std::size_t d = 0;
    for (std::size_t m = 0; m < g.beams; ++m)
        d += (beam_on[m] && g.edge(m, k)) ? 1 : 0;
    return d;
}

// Removes users that break the degree or power rules and beams left without a
// selected neighbor, until nothing changes.
void repair(const BeamGraph &g, std::size_t t_dl, double p0, std::vector<std::uint8_t> &beam_on,
            std::vector<std::uint8_t> &user_on)
{
    bool changed = true;
    while (changed)
    {
        changed = false;
        for (std::size_t k = 0; k < g.users; ++k)
            if (user_on[k] && (user_degree(g, k, beam_on) > t_dl || user_power(g, k, beam_on) < p0))
            {
                user_on[k] = 0;
                changed = true;
            }
        for (std::size_t m = 0; m < g.beams; ++m)
        {
            if (!beam_on[m])
                continue;
            bool has = false;
            for (std::size_t k = 0; k < g.users && !has; ++k)
                has = user_on[k] && g.edge(m, k);
            if (!has)
            {
                beam_on[m] = 0;
                changed = true;
            }
        }
    }
}

// Adds beams in index order while every selected user stays within T_dl and
// the beam has a selected neighbor. Never lowers the matching size.
void fill_beams(const BeamGraph &g, std::size_t t_dl, std::vector<std::uint8_t> &beam_on,
                const std::vector<std::uint8_t> &user_on)
{
    std::vector<std::size_t> degree(g.users, 0);
    for (std::size_t k = 0; k < g.users; ++k)
        if (user_on[k])
            degree[k] = user_degree(g, k, beam_on);
    for (std::size_t m = 0; m < g.beams; ++m)
    {
        if (beam_on[m])
            continue;
        bool covered = false, fits = true;
        for (std::size_t k = 0; k < g.users; ++k)
            if (user_on[k] && g.edge(m, k))
            {
                covered = true;
                fits = fits && degree[k] < t_dl;
            }
        if (!covered || !fits)
            continue;
        beam_on[m] = 1;
        for (std::size_t k = 0; k < g.users; ++k)
            if (user_on[k] && g.edge(m, k))
                ++degree[k];
    }
}

RVec assemble(const SparsificationMilp &f, const BeamGraph &g, const std::vector<std::uint8_t> &beam_on,
              const std::vector<std::uint8_t> &user_on)
{
    RVec v(f.mip.lp.num_vars(), 0.0);
    std::vector<std::size_t> bs, us;
    for (std::size_t m = 0; m < g.beams; ++m)
        if (beam_on[m])
        {
            v[f.x(m)] = 1.0;
            bs.push_back(m);
        }
    for (std::size_t k = 0; k < g.users; ++k)
        if (user_on[k])
        {
            v[f.y(k)] = 1.0;
            us.push_back(k);
        }
    const auto match = opt::max_matching(g.subgraph(bs, us));
    for (const auto &[m, k] : match.edges)
    {
        const auto it = std::find(f.z_edges.begin(), f.z_edges.end(), opt::Edge{m, k});
        v[f.z(static_cast<std::size_t>(it - f.z_edges.begin()))] = 1.0;
    }
    return v;
}

// Largest value a + eps b (a, b integers, 0 <= b <= M) not above the bound.
double lattice_floor(double bound, double eps, std::size_t beams)
{
    const double a = std::floor(bound + 1e-9);
    if (eps <= 0.0)
        return a;
    double b = std::floor((bound - a) / eps + 1e-9);
    b = std::clamp(b, 0.0, static_cast<double>(beams));
    return a + eps * b;
}

cx dft_entry(std::size_t n, std::size_t m, std::size_t size)
{
    const auto k = static_cast<double>((n * m) % size);
    const double ph = -2.0 * std::numbers::pi * k / static_cast<double>(size);
    return cx(std::cos(ph), std::sin(ph)) / std::sqrt(static_cast<double>(size));
}

} // namespace

// ---- graph -------------------------------------------------------------------

std::size_t BeamGraph::edge_count() const
{
    return static_cast<std::size_t>(std::count(adjacency.begin(), adjacency.end(), std::uint8_t{1}));
}

std::vector<std::size_t> BeamGraph::neighbors_of_user(std::size_t k) const
{
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < beams; ++m)
        if (edge(m, k))
            out.push_back(m);
    return out;
}

opt::MatchingInstance BeamGraph::subgraph(const std::vector<std::size_t> &beam_set,
                                          const std::vector<std::size_t> &user_set) const
{
    opt::MatchingInstance inst;
    inst.left = beams;
    inst.right = users;
    for (std::size_t m : beam_set)
        for (std::size_t k : user_set)
            if (edge(m, k))
                inst.edges.emplace_back(m, k);
    return inst;
}

namespace
{

void fill_isolated(BeamGraph &g)
{
    g.isolated_beams.clear();
    g.isolated_users.clear();
    for (std::size_t m = 0; m < g.beams; ++m)
    {
        bool any = false;
        for (std::size_t k = 0; k < g.users; ++k)
            any = any || g.edge(m, k);
        if (!any)
            g.isolated_beams.push_back(m);
    }
    for (std::size_t k = 0; k < g.users; ++k)
    {
        bool any = false;
        for (std::size_t m = 0; m < g.beams; ++m)
            any = any || g.edge(m, k);
        if (!any)
            g.isolated_users.push_back(k);
    }
}

} // namespace

BeamGraph build_beam_graph(const std::vector<RVec> &spectra, double th_rel)
{
    if (spectra.empty())
        throw InvalidArgument("build_beam_graph: no users");
    if (!(th_rel > 0.0 && th_rel < 1.0))
        throw InvalidArgument("build_beam_graph: th_rel must lie in (0, 1)");
    const std::size_t beams = spectra.front().size();
    if (beams == 0)
        throw InvalidArgument("build_beam_graph: empty spectrum");

    BeamGraph g;
    g.beams = beams;
    g.users = spectra.size();
    g.weights = RealMatrix(beams, g.users);
    g.adjacency.assign(beams * g.users, 0);
    double wmax = 0.0;
    for (std::size_t k = 0; k < g.users; ++k)
    {
        if (spectra[k].size() != beams)
            throw InvalidArgument("build_beam_graph: spectra lengths differ");
        for (std::size_t m = 0; m < beams; ++m)
        {
            const double w = spectra[k][m];
            if (!(w >= 0.0) || !std::isfinite(w))
                throw InvalidArgument("build_beam_graph: spectra must be finite and nonnegative");
            g.weights(m, k) = w;
            wmax = std::max(wmax, w);
        }
    }
    g.threshold = th_rel * wmax;
    if (wmax > 0.0)
        for (std::size_t m = 0; m < beams; ++m)
            for (std::size_t k = 0; k < g.users; ++k)
                g.adjacency[m * g.users + k] = g.weights(m, k) > g.threshold ? 1 : 0;
    fill_isolated(g);
    return g;
}

BeamGraph make_beam_graph(const RealMatrix &weights, const std::vector<std::uint8_t> &adjacency)
{
    if (adjacency.size() != weights.rows() * weights.cols())
        throw InvalidArgument("make_beam_graph: adjacency size mismatch");
    BeamGraph g;
    g.beams = weights.rows();
    g.users = weights.cols();
    g.weights = weights;
    g.adjacency.resize(adjacency.size());
    for (std::size_t i = 0; i < adjacency.size(); ++i)
        g.adjacency[i] = adjacency[i] ? 1 : 0;
    for (double w : weights.data())
        if (!(w >= 0.0) || !std::isfinite(w))
            throw InvalidArgument("make_beam_graph: weights must be finite and nonnegative");
    fill_isolated(g);
    return g;
}

// ---- MILP --------------------------------------------------------------------

SparsificationMilp formulate_milp(const BeamGraph &g, std::size_t t_dl, double p0, double epsilon,
                                  bool tight_big_m)
{
    check_sets(g, t_dl, p0);
    const double big = static_cast<double>(g.beams);
    if (!(epsilon >= 0.0) || epsilon * big >= 1.0)
        throw InvalidArgument("formulate_milp: epsilon must satisfy 0 <= epsilon < 1/M");

    SparsificationMilp f;
    f.beams = g.beams;
    f.users = g.users;
    f.epsilon = epsilon;
    auto &lp = f.mip.lp;
    for (std::size_t m = 0; m < g.beams; ++m)
        lp.add_var(epsilon, 0.0, 1.0, "x" + std::to_string(m));
    for (std::size_t k = 0; k < g.users; ++k)
        lp.add_var(0.0, 0.0, 1.0, "y" + std::to_string(k));
    for (std::size_t m = 0; m < g.beams; ++m)
        for (std::size_t k = 0; k < g.users; ++k)
            if (g.edge(m, k))
            {
                f.z_edges.emplace_back(m, k);
                lp.add_var(1.0, 0.0, 1.0, "z" + std::to_string(m) + "_" + std::to_string(k));
            }
    for (std::size_t j = 0; j < g.beams + g.users; ++j)
        f.mip.integer_vars.push_back(j);

    std::vector<std::vector<opt::Term>> beam_rows(g.beams), user_rows(g.users);
    for (std::size_t i = 0; i < f.z_edges.size(); ++i)
    {
        beam_rows[f.z_edges[i].first].push_back({f.z(i), 1.0});
        user_rows[f.z_edges[i].second].push_back({f.z(i), 1.0});
    }
    for (std::size_t m = 0; m < g.beams; ++m)
    {
        auto t = beam_rows[m];
        t.push_back({f.x(m), -1.0});
        lp.add_constraint(std::move(t), opt::Sense::LessEqual, 0.0, "beam_match" + std::to_string(m));
    }
    for (std::size_t k = 0; k < g.users; ++k)
    {
        auto t = user_rows[k];
        t.push_back({f.y(k), -1.0});
        lp.add_constraint(std::move(t), opt::Sense::LessEqual, 0.0, "user_match" + std::to_string(k));
    }
    for (std::size_t k = 0; k < g.users; ++k)
    {
        // sum A x - T y <= M (1 - y)  <=>  sum A x + (M - T) y <= M
        std::vector<opt::Term> t;
        for (std::size_t m = 0; m < g.beams; ++m)
            if (g.edge(m, k))
                t.push_back({f.x(m), 1.0});
        const double bound = tight_big_m ? std::max(static_cast<double>(t.size()), static_cast<double>(t_dl)) : big;
        t.push_back({f.y(k), bound - static_cast<double>(t_dl)});
        lp.add_constraint(std::move(t), opt::Sense::LessEqual, bound, "pilot" + std::to_string(k));
    }
    for (std::size_t k = 0; k < g.users; ++k)
    {
        std::vector<opt::Term> t{{f.y(k), p0}};
        for (std::size_t m = 0; m < g.beams; ++m)
            if (g.edge(m, k))
                t.push_back({f.x(m), -g.weights(m, k)});
        lp.add_constraint(std::move(t), opt::Sense::LessEqual, 0.0, "power" + std::to_string(k));
    }
    for (std::size_t m = 0; m < g.beams; ++m)
    {
        std::vector<opt::Term> t{{f.x(m), 1.0}};
        for (std::size_t k = 0; k < g.users; ++k)
            if (g.edge(m, k))
                t.push_back({f.y(k), -1.0});
        lp.add_constraint(std::move(t), opt::Sense::LessEqual, 0.0, "covered" + std::to_string(m));
    }
    return f;
}

SparsificationPlan solve_sparsification(const BeamGraph &g, std::size_t t_dl, double p0,
                                        const SparsifyOptions &options)
{
    check_sets(g, t_dl, p0);
    SparsificationPlan plan;
    plan.t_dl = t_dl;
    plan.p0 = p0;
    if (g.empty())
        return plan;

    const double eps = options.epsilon_factor / static_cast<double>(g.beams);
    // Phase 1 maximizes the matching alone; phase 2 keeps that matching size
    // and maximizes the beam count. The optimum equals that of the
    // eps-weighted objective because eps * M < 1.
    const bool two_phase = options.lexicographic && eps > 0.0;
    const auto f = formulate_milp(g, t_dl, p0, two_phase ? 0.0 : eps, options.tight_big_m);

    const auto rounded = [&](const RVec &root) {
        std::vector<std::uint8_t> beam_on(g.beams), user_on(g.users);
        for (std::size_t m = 0; m < g.beams; ++m)
            beam_on[m] = on(root[f.x(m)]) ? 1 : 0;
        for (std::size_t k = 0; k < g.users; ++k)
            user_on[k] = on(root[f.y(k)]) ? 1 : 0;
        repair(g, t_dl, p0, beam_on, user_on);
        return assemble(f, g, beam_on, user_on);
    };
    const auto observe = [&](const opt::MixedIntegerProgram &, opt::BnbOptions &bnb) {
        if (options.node_observer)
            bnb.node_observer = [&](const opt::NodeInfo &n) { options.node_observer(n, f); };
    };

    opt::BnbOptions bnb;
    bnb.tol = options.tol;
    if (options.warm_start)
        bnb.heuristic = [&](const RVec &root) -> std::optional<RVec> { return rounded(root); };
    if (options.lattice_bound)
        bnb.bound_tightener = [e = two_phase ? 0.0 : eps, beams = g.beams](double b) {
            return lattice_floor(b, e, beams);
        };
    observe(f.mip, bnb);

    auto res = opt::branch_and_bound(f.mip, bnb);
    if (res.status == opt::MipStatus::Infeasible || res.status == opt::MipStatus::Unbounded)
        throw NumericalFailure(std::string("solve_sparsification: unexpected MILP status ") +
                               opt::mip_status_name(res.status)); // x = y = z = 0 is always feasible
    std::size_t nodes = res.node_count;
    bool approximate = res.status == opt::MipStatus::NodeLimit;
    bool heuristic_used = res.heuristic_used;

    if (two_phase)
    {
        double matched = 0.0;
        for (std::size_t i = 0; i < f.z_edges.size(); ++i)
            matched += res.solution[f.z(i)];
        matched = std::round(matched);

        opt::MixedIntegerProgram second = f.mip;
        for (std::size_t j = 0; j < second.lp.num_vars(); ++j)
            second.lp.objective[j] = j < g.beams ? 1.0 : 0.0;
        std::vector<opt::Term> all_z;
        for (std::size_t i = 0; i < f.z_edges.size(); ++i)
            all_z.push_back({f.z(i), 1.0});
        second.lp.add_constraint(std::move(all_z), opt::Sense::GreaterEqual, matched, "keep_matching");

        const auto count = [&](const RVec &v) {
            double n = 0.0;
            for (std::size_t m = 0; m < g.beams; ++m)
                n += v[f.x(m)];
            return n;
        };
        opt::BnbOptions bnb2;
        bnb2.tol = options.tol;
        bnb2.tol.bnb_node_limit = std::min(options.tol.bnb_node_limit, options.beam_phase_node_limit);
        const auto filled = [&](const RVec &v) {
            std::vector<std::uint8_t> beam_on(g.beams), user_on(g.users);
            for (std::size_t m = 0; m < g.beams; ++m)
                beam_on[m] = on(v[f.x(m)]) ? 1 : 0;
            for (std::size_t k = 0; k < g.users; ++k)
                user_on[k] = on(v[f.y(k)]) ? 1 : 0;
            fill_beams(g, t_dl, beam_on, user_on);
            return assemble(f, g, beam_on, user_on);
        };
        bnb2.heuristic = [&, first = res.solution](const RVec &root) -> std::optional<RVec> {
            if (!options.warm_start)
                return first;
            RVec best = filled(first);
            RVec cand = filled(rounded(root));
            double m = 0.0;
            for (std::size_t i = 0; i < f.z_edges.size(); ++i)
                m += cand[f.z(i)];
            return m >= matched - 0.5 && count(cand) > count(best) ? cand : best;
        };
        if (options.lattice_bound)
            bnb2.bound_tightener = [](double b) { return std::floor(b + 1e-9); };
        observe(second, bnb2);

        auto res2 = opt::branch_and_bound(second, bnb2);
        if (res2.status == opt::MipStatus::Infeasible || res2.status == opt::MipStatus::Unbounded)
            throw NumericalFailure(std::string("solve_sparsification: unexpected second-phase status ") +
                                   opt::mip_status_name(res2.status)); // the first-phase point is feasible
        nodes += res2.node_count;
        approximate = approximate || res2.status == opt::MipStatus::NodeLimit;
        heuristic_used = heuristic_used || res2.heuristic_used;
        res2.objective = matched + eps * res2.objective;
        res2.gap = eps * res2.gap;
        res = std::move(res2);
    }

    plan.beams = selected(res.solution, 0, g.beams);
    plan.users = selected(res.solution, g.beams, g.users);
    plan.objective = res.objective;
    plan.node_count = nodes;
    plan.gap = res.gap;
    plan.approximate = approximate;
    plan.heuristic_used = heuristic_used;
    finish_plan(g, plan);
    return plan;
}

SparsificationPlan brute_force_sparsify(const BeamGraph &g, std::size_t t_dl, double p0)
{
    check_sets(g, t_dl, p0);
    if (g.beams + g.users > 14)
        throw InvalidArgument("brute_force_sparsify: at most 14 nodes");
    const double eps = 0.5 / static_cast<double>(g.beams);

    SparsificationPlan best;
    best.t_dl = t_dl;
    best.p0 = p0;
    bool have = false;
    std::vector<std::uint8_t> beam_on(g.beams), user_on(g.users);
    for (std::size_t us = 0; us < (std::size_t{1} << g.users); ++us)
    {
        for (std::size_t k = 0; k < g.users; ++k)
            user_on[k] = (us >> k) & 1;
        for (std::size_t bs = 0; bs < (std::size_t{1} << g.beams); ++bs)
        {
            for (std::size_t m = 0; m < g.beams; ++m)
                beam_on[m] = (bs >> m) & 1;
            bool ok = true;
            for (std::size_t k = 0; k < g.users && ok; ++k)
                if (user_on[k])
                    ok = user_degree(g, k, beam_on) <= t_dl && user_power(g, k, beam_on) >= p0;
            for (std::size_t m = 0; m < g.beams && ok; ++m)
                if (beam_on[m])
                {
                    bool has = false;
                    for (std::size_t k = 0; k < g.users; ++k)
                        has = has || (user_on[k] && g.edge(m, k));
                    ok = has;
                }
            if (!ok)
                continue;
            SparsificationPlan cand;
            cand.t_dl = t_dl;
            cand.p0 = p0;
            for (std::size_t m = 0; m < g.beams; ++m)
                if (beam_on[m])
                    cand.beams.push_back(m);
            for (std::size_t k = 0; k < g.users; ++k)
                if (user_on[k])
                    cand.users.push_back(k);
            finish_plan(g, cand);
            cand.objective = static_cast<double>(cand.matching_size) +
                             eps * static_cast<double>(cand.beams.size());
            if (!have || cand.objective > best.objective + 1e-12)
            {
                best = std::move(cand);
                have = true;
            }
        }
    }
    return best;
}

std::vector<std::string> check_plan(const BeamGraph &g, const SparsificationPlan &plan)
{
    std::vector<std::string> issues;
    auto sorted_unique = [](const std::vector<std::size_t> &v) {
        return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    if (!sorted_unique(plan.beams) || !sorted_unique(plan.users))
        issues.push_back("beam or user list not strictly ascending");
    for (std::size_t m : plan.beams)
        if (m >= g.beams)
            issues.push_back("beam index out of range: " + std::to_string(m));
    for (std::size_t k : plan.users)
        if (k >= g.users)
            issues.push_back("user index out of range: " + std::to_string(k));
    if (!issues.empty())
        return issues;

    std::vector<std::uint8_t> beam_on(g.beams, 0);
    for (std::size_t m : plan.beams)
        beam_on[m] = 1;
    for (std::size_t k : plan.users)
    {
        const std::size_t d = user_degree(g, k, beam_on);
        if (d > plan.t_dl)
            issues.push_back("user " + std::to_string(k) + " sees " + std::to_string(d) + " beams > T_dl");
        const double p = user_power(g, k, beam_on);
        if (p < plan.p0 * (1.0 - 1e-12))
            issues.push_back("user " + std::to_string(k) + " power below P0");
    }
    for (std::size_t m : plan.beams)
        if (std::none_of(plan.users.begin(), plan.users.end(), [&](std::size_t k) { return g.edge(m, k); }))
            issues.push_back("beam " + std::to_string(m) + " has no selected neighbor");
    const auto sub = g.subgraph(plan.beams, plan.users);
    if (!opt::is_matching(sub, plan.matching) || plan.matching.size() != plan.matching_size)
        issues.push_back("matching is not a valid matching of the selected subgraph");
    else if (opt::max_matching(sub).size != plan.matching_size)
        issues.push_back("matching is not maximum on the selected subgraph");
    return issues;
}

// ---- precoder ----------------------------------------------------------------

SparsifyingPrecoder::SparsifyingPrecoder(std::vector<std::size_t> beams, std::size_t antennas)
    : beams_(std::move(beams)), antennas_(antennas)
{
    if (antennas_ == 0)
        throw InvalidArgument("SparsifyingPrecoder: antennas must be >= 1");
    for (std::size_t m : beams_)
        if (m >= antennas_)
            throw InvalidArgument("SparsifyingPrecoder: beam index out of range");
}

ComplexMatrix SparsifyingPrecoder::matrix() const
{
    ComplexMatrix b(beams_.size(), antennas_);
    for (std::size_t i = 0; i < beams_.size(); ++i)
        for (std::size_t n = 0; n < antennas_; ++n)
            b(i, n) = std::conj(dft_entry(n, beams_[i], antennas_));
    return b;
}

CVec SparsifyingPrecoder::apply(std::span<const cx> h) const
{
    if (h.size() != antennas_)
        throw InvalidArgument("SparsifyingPrecoder::apply: length mismatch");
    CVec out(beams_.size());
    for (std::size_t i = 0; i < beams_.size(); ++i)
    {
        cx acc = 0.0;
        for (std::size_t n = 0; n < antennas_; ++n)
            acc += std::conj(dft_entry(n, beams_[i], antennas_)) * h[n];
        out[i] = acc;
    }
    return out;
}

CVec SparsifyingPrecoder::lift(std::span<const cx> c) const
{
    if (c.size() != beams_.size())
        throw InvalidArgument("SparsifyingPrecoder::lift: length mismatch");
    CVec out(antennas_, 0.0);
    for (std::size_t i = 0; i < beams_.size(); ++i)
        for (std::size_t n = 0; n < antennas_; ++n)
            out[n] += dft_entry(n, beams_[i], antennas_) * c[i];
    return out;
}

SparsifyingPrecoder sparsifying_precoder(const SparsificationPlan &plan, std::size_t antennas)
{
    return SparsifyingPrecoder(plan.beams, antennas);
}

// ---- JSON --------------------------------------------------------------------

std::string plan_to_json(const SparsificationPlan &plan)
{
    nlohmann::json j;
    j["beams"] = plan.beams;
    j["users"] = plan.users;
    j["matching"] = nlohmann::json::array();
    for (const auto &[m, k] : plan.matching)
        j["matching"].push_back({m, k});
    j["matching_size"] = plan.matching_size;
    j["objective"] = plan.objective;
    j["t_dl"] = plan.t_dl;
    j["p0"] = plan.p0;
    j["nodes"] = plan.node_count;
    j["gap"] = plan.gap;
    j["approximate"] = plan.approximate;
    return j.dump(2);
}

SparsificationPlan plan_from_json(const std::string &text)
{
    try
    {
        const auto j = nlohmann::json::parse(text);
        SparsificationPlan p;
        p.beams = j.at("beams").get<std::vector<std::size_t>>();
        p.users = j.at("users").get<std::vector<std::size_t>>();
        for (const auto &e : j.at("matching"))
            p.matching.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        p.matching_size = j.at("matching_size").get<std::size_t>();
        p.objective = j.at("objective").get<double>();
        p.t_dl = j.at("t_dl").get<std::size_t>();
        p.p0 = j.at("p0").get<double>();
        p.node_count = j.value("nodes", std::size_t{0});
        p.gap = j.value("gap", 0.0);
        p.approximate = j.value("approximate", false);
        return p;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw InvalidArgument(std::string("plan_from_json: ") + e.what());
    }
}

} // namespace acs
