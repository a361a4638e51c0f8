// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "acs/numerics.hpp"
#include "acs/opt/matching.hpp"
#include "acs/opt/milp.hpp"

namespace acs
{

// Bipartite beam-user graph. Edge (m, k) exists when lambda_m^(k) > th.
struct BeamGraph
{
    std::size_t beams = 0;
    std::size_t users = 0;
    RealMatrix weights;                 // beams x users, W(m, k) = lambda_m^(k)
    std::vector<std::uint8_t> adjacency; // row-major beams x users
    double threshold = 0.0;
    std::vector<std::size_t> isolated_beams;
    std::vector<std::size_t> isolated_users;

    bool edge(std::size_t m, std::size_t k) const { return adjacency[m * users + k] != 0; }
    std::size_t edge_count() const;
    bool empty() const { return edge_count() == 0; }
    std::vector<std::size_t> neighbors_of_user(std::size_t k) const;
    opt::MatchingInstance subgraph(const std::vector<std::size_t> &beam_set,
                                   const std::vector<std::size_t> &user_set) const;
};

// th = th_rel * max W. All spectra must have equal length.
BeamGraph build_beam_graph(const std::vector<RVec> &spectra, double th_rel);

// Same graph from an explicit adjacency, for tests and tools. Weights of
// non-edges are kept but never used.
BeamGraph make_beam_graph(const RealMatrix &weights, const std::vector<std::uint8_t> &adjacency);

// Variable layout of the sparsification MILP.
struct SparsificationMilp
{
    opt::MixedIntegerProgram mip;
    std::size_t beams = 0;
    std::size_t users = 0;
    std::vector<opt::Edge> z_edges; // z variable i corresponds to z_edges[i]
    double epsilon = 0.0;

    std::size_t x(std::size_t m) const { return m; }
    std::size_t y(std::size_t k) const { return beams + k; }
    std::size_t z(std::size_t i) const { return beams + users + i; }
};

// maximize sum z + epsilon sum x subject to
//   sum_k z_mk <= x_m, sum_m z_mk <= y_k,
//   sum_m A_mk x_m <= T_dl y_k + M (1 - y_k),
//   P0 y_k <= sum_m A_mk W_mk x_m,
//   x_m <= sum_k A_mk y_k,
// x, y binary, z in [0, 1]. z exists only on edges (z_mk <= A_mk fixes the rest at 0).
// Requires 0 <= epsilon < 1/M. With tight_big_m the M in the pilot row is
// replaced by the user's degree d_k, which is still valid for every binary
// point (sum_m A_mk x_m <= d_k) and gives a much stronger LP relaxation.
SparsificationMilp formulate_milp(const BeamGraph &g, std::size_t t_dl, double p0, double epsilon,
                                  bool tight_big_m = false);

struct SparsifyOptions
{
    double epsilon_factor = 0.5; // epsilon = epsilon_factor / M
    bool warm_start = true;      // greedy rounding + matching incumbent
    bool lattice_bound = true;   // round LP bounds down to reachable objective values
    bool tight_big_m = true;     // degree instead of M in the pilot rows
    bool lexicographic = true;   // matching first, then beam count, instead of one eps-weighted solve
    // Node cap of the beam-count phase. Hitting it keeps the best count found
    // (the matching size stays proven) and marks the plan approximate.
    std::size_t beam_phase_node_limit = 2000;
    opt::Tolerances tol = opt::default_tolerances();
    std::function<void(const opt::NodeInfo &, const SparsificationMilp &)> node_observer;
};

struct SparsificationPlan
{
    std::vector<std::size_t> beams; // ascending
    std::vector<std::size_t> users; // ascending
    std::vector<opt::Edge> matching; // (beam, user), certified maximum on the subgraph
    std::size_t matching_size = 0;
    double objective = 0.0;
    std::size_t t_dl = 0;
    double p0 = 0.0;
    std::size_t node_count = 0;
    double gap = 0.0;
    bool approximate = false; // node limit reached
    bool heuristic_used = false;

    bool empty() const { return beams.empty(); }
};

SparsificationPlan solve_sparsification(const BeamGraph &g, std::size_t t_dl, double p0,
                                        const SparsifyOptions &options = {});

// Exhaustive search over beam and user subsets; |beams| + |users| <= 14.
// Maximizes matching size, then the number of beams.
SparsificationPlan brute_force_sparsify(const BeamGraph &g, std::size_t t_dl, double p0);

// Violations of the plan invariants against g; empty when the plan is valid.
std::vector<std::string> check_plan(const BeamGraph &g, const SparsificationPlan &plan);

// B = F_B^H: row i is the conjugate of DFT column beams[i].
class SparsifyingPrecoder
{
public:
    SparsifyingPrecoder(std::vector<std::size_t> beams, std::size_t antennas);

    std::size_t rows() const { return beams_.size(); }
    std::size_t antennas() const { return antennas_; }
    const std::vector<std::size_t> &beams() const { return beams_; }
    ComplexMatrix matrix() const;
    CVec apply(std::span<const cx> h) const;              // B h
    CVec lift(std::span<const cx> coefficients) const;    // B^H c = F_B c

private:
    std::vector<std::size_t> beams_;
    std::size_t antennas_;
};

SparsifyingPrecoder sparsifying_precoder(const SparsificationPlan &plan, std::size_t antennas);

// JSON layout:
// { "beams": [...], "users": [...], "matching": [[m, k], ...], "matching_size": n,
//   "objective": v, "t_dl": t, "p0": p, "nodes": n, "gap": g, "approximate": bool }
std::string plan_to_json(const SparsificationPlan &plan);
SparsificationPlan plan_from_json(const std::string &text);

} // namespace acs
