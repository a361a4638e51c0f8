// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "acs/evaluation.hpp"
#include "acs/rng.hpp"

using namespace acs;

namespace
{

ComplexMatrix random_matrix(std::size_t r, std::size_t c, RandomStream &s)
{
    ComplexMatrix m(r, c);
    for (auto &v : m.data())
        v = s.complex_normal();
    return m;
}

std::vector<CVec> columns(const ComplexMatrix &m)
{
    std::vector<CVec> out;
    for (std::size_t c = 0; c < m.cols(); ++c)
        out.push_back(m.col(c));
    return out;
}

SparsifyingPrecoder all_beams(std::size_t m)
{
    std::vector<std::size_t> b(m);
    for (std::size_t i = 0; i < m; ++i)
        b[i] = i;
    return SparsifyingPrecoder(b, m);
}

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.M = 16;
    c.K = 4;
    c.T = 32;
    c.tdl_list = {4, 8};
    c.snr_db_list = {10.0, 20.0};
    c.n_trials = 3;
    c.seed = 5;
    c.n_ul = 200;
    c.grid_factor = 2;
    return c;
}

} // namespace

TEST_CASE("zf_precoder examples")
{
    // orthonormal columns
    const auto f = dft_matrix(6);
    ComplexMatrix h(6, 3);
    for (std::size_t c = 0; c < 3; ++c)
        h.set_col(c, f.col(2 * c));
    const auto zf = zf_precoder(h, 3.0);
    CHECK(frobenius_distance(zf.v, h) < 1e-12);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(zf.j[k] == Catch::Approx(1.0));
        CHECK(zf.p[k] == Catch::Approx(1.0));
    }

    // single user: matched filter
    RandomStream s(1);
    const auto one = random_matrix(5, 1, s);
    const auto z1 = zf_precoder(one, 2.0);
    const double n = frobenius_norm(one);
    CHECK(frobenius_distance(z1.v, scale(one, 1.0 / n)) < 1e-12);
    CHECK(z1.j[0] == Catch::Approx(n * n));

    // random 8 x 4
    const auto hr = random_matrix(8, 4, s);
    const auto zr = zf_precoder(hr, 5.0);
    const auto hv = matmul_adj_left(hr, zr.v);
    double ptot = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
    {
        ptot += zr.p[r];
        double cn = 0.0;
        for (std::size_t i = 0; i < 8; ++i)
            cn += std::norm(zr.v(i, r));
        CHECK(std::abs(cn - 1.0) < 1e-10);
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(std::abs(hv(r, c) - (r == c ? cx(std::sqrt(zr.j[r])) : cx(0.0))) < 1e-8);
    }
    CHECK(std::abs(ptot - 5.0) < 1e-10);

    ComplexMatrix dup(8, 2);
    dup.set_col(0, hr.col(0));
    dup.set_col(1, hr.col(0));
    CHECK_THROWS_AS(zf_precoder(dup, 1.0), NumericalFailure);
    CHECK_THROWS_AS(zf_precoder(ComplexMatrix(4, 2), 1.0), NumericalFailure);
    CHECK_THROWS_AS(zf_precoder(random_matrix(2, 3, s), 1.0), InvalidArgument);
}

TEST_CASE("zf_with_retry drops a dependent user")
{
    RandomStream s(2);
    auto h = random_matrix(6, 3, s);
    h.set_col(2, h.col(0));
    std::vector<std::size_t> kept;
    const auto zf = zf_with_retry(h, 1.0, kept);
    CHECK(kept.size() == 2);
    CHECK(zf.streams() == 2);
    CHECK(std::find(kept.begin(), kept.end(), 1) != kept.end());
}

TEST_CASE("effective gains with perfect CSI are interference free")
{
    RandomStream s(3);
    const std::size_t m = 8;
    const auto b = all_beams(m);
    std::vector<CVec> h;
    for (int k = 0; k < 3; ++k)
        h.push_back(random_matrix(m, 1, s).col(0));
    ComplexMatrix heff(m, 3);
    for (std::size_t k = 0; k < 3; ++k)
        heff.set_col(k, b.apply(h[k]));
    const auto zf = zf_precoder(heff, 6.0);
    const auto g = effective_gains(h, b, zf);
    const double gn = frobenius_norm(g);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            if (r != c)
                CHECK(std::abs(g(r, c)) <= 1e-8 * gn);
            else
                CHECK(std::abs(g(r, r) - std::sqrt(zf.j[r] * zf.p[r])) < 1e-8 * gn);

    // zero channel row
    auto h0 = h;
    h0[1] = CVec(m, 0.0);
    const auto g0 = effective_gains(h0, b, zf);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(g0(1, c) == cx(0.0));
}

TEST_CASE("sum_rate examples")
{
    ComplexMatrix b(1, 1);
    b(0, 0) = std::sqrt(3.0);
    CHECK(sum_rate(b, 10, 10) == 0.0);
    CHECK(sum_rate(b, 0, 10) == Catch::Approx(2.0));
    CHECK(sum_rate(b, 5, 10) == Catch::Approx(1.0));

    // two users with unit cross gain: SINR 3 / 2 each
    ComplexMatrix b2(2, 2);
    b2(0, 0) = b2(1, 1) = std::sqrt(3.0);
    b2(0, 1) = b2(1, 0) = 1.0;
    CHECK(sum_rate(b2, 0, 4) == Catch::Approx(2.0 * std::log2(2.5)));
    CHECK(sum_rate(ComplexMatrix(0, 0), 1, 4) == 0.0);
}

TEST_CASE("normalized_error examples")
{
    RandomStream s(4);
    const auto h = random_matrix(6, 2, s);
    CHECK(normalized_error(h, h) == 0.0);
    CHECK(normalized_error(h, ComplexMatrix(6, 2)) == Catch::Approx(1.0));

    auto half = h;
    half.set_col(1, CVec(6, 0.0));
    const double e1 = norm2(h.col(1));
    const double e0 = norm2(h.col(0));
    CHECK(normalized_error(h, half) == Catch::Approx(e1 * e1 / (e0 * e0 + e1 * e1)));
}

TEST_CASE("greedy selection")
{
    const auto f = dft_matrix(8);
    SECTION("orthogonal equal-gain users are all selected")
    {
        std::vector<CVec> c;
        for (std::size_t k = 0; k < 4; ++k)
            c.push_back(f.col(k));
        const auto sel = greedy_user_selection(c, 100.0, 4, 64);
        CHECK(sel == std::vector<std::size_t>{0, 1, 2, 3});
    }
    SECTION("duplicated channels keep one copy")
    {
        std::vector<CVec> c(3, f.col(2));
        const auto sel = greedy_user_selection(c, 100.0, 4, 64);
        CHECK(sel.size() == 1);
    }
    SECTION("single candidate and none")
    {
        CHECK(greedy_user_selection({f.col(0)}, 10.0, 1, 8).size() == 1);
        CHECK(greedy_user_selection({}, 10.0, 1, 8).empty());
    }
    SECTION("greedy lands in the exhaustive top 3")
    {
        // 5 candidates, 4 dimensions, moderate SNR: the greedy subset should
        // rank among the 3 best of all 31 non-empty subsets nearly always.
        int hits = 0;
        const int trials = 200;
        for (int t = 0; t < trials; ++t)
        {
            auto rs = RandomStream::derive(77, Purpose::Test, {static_cast<std::uint64_t>(t)});
            const auto cand = columns(random_matrix(4, 5, rs));
            const double p = 10.0;
            const auto sel = greedy_user_selection(cand, p, 8, 64);
            const double r = estimated_zf_rate(cand, sel, p, 8, 64);
            std::vector<double> all;
            for (unsigned mask = 1; mask < 32; ++mask)
            {
                std::vector<std::size_t> sub;
                for (std::size_t k = 0; k < 5; ++k)
                    if (mask & (1u << k))
                        sub.push_back(k);
                all.push_back(estimated_zf_rate(cand, sub, p, 8, 64));
            }
            std::sort(all.rbegin(), all.rend());
            if (r >= all[2] - 1e-9)
                ++hits;
        }
        CHECK(hits >= 190);
    }
}

TEST_CASE("run_experiment edge cases and invariants")
{
    auto cfg = small_config();
    SECTION("zero trials")
    {
        cfg.n_trials = 0;
        const auto r = run_experiment(cfg);
        CHECK(r.records.empty());
        CHECK(r.failures.empty());
    }
    SECTION("record grid, invariants and thread independence")
    {
        const auto a = run_experiment(cfg, RunOptions{1});
        const auto b = run_experiment(cfg, RunOptions{3});
        REQUIRE(a.failures.empty());
        REQUIRE(a.records.size() == cfg.n_trials * cfg.tdl_list.size() * cfg.snr_db_list.size());
        CHECK(records_to_csv(a.records) == records_to_csv(b.records));
        for (std::size_t i = 0; i < a.records.size(); ++i)
        {
            const auto &r = a.records[i];
            CHECK(r.trial == i / 4);
            CHECK(r.t_dl == cfg.tdl_list[(i / 2) % 2]);
            CHECK(r.snr_db == cfg.snr_db_list[i % 2]);
            CHECK(r.served <= r.matching_size);
            CHECK(r.served == r.gains.size());
            CHECK(r.matching_size <= std::min(cfg.K, r.t_dl));
            CHECK(r.err_norm >= 0.0);
            CHECK(r.sum_rate_bits >= 0.0);
        }

        std::istringstream csv(records_to_csv(a.records));
        std::string line;
        std::getline(csv, line);
        CHECK(line == "trial,Tdl,snr_db,served,matching_size,err_norm,sum_rate_bits");
        std::size_t rows = 0;
        while (std::getline(csv, line))
        {
            ++rows;
            CHECK(std::count(line.begin(), line.end(), ',') == 6);
        }
        CHECK(rows == a.records.size());

        const auto j = nlohmann::json::parse(summary_to_json(cfg, a));
        CHECK(j["trials"] == cfg.n_trials);
        CHECK(j["grid"].size() == 4);
        CHECK(j["grid"][0]["count"] == cfg.n_trials);
        CHECK(j["failures"].empty());
    }
    SECTION("exact covariance and full probing recover the channel at high SNR")
    {
        cfg.exact_covariance = true;
        cfg.tdl_list = {cfg.M};
        cfg.snr_db_list = {40.0};
        cfg.n_trials = 4;
        const auto r = run_experiment(cfg);
        REQUIRE(r.records.size() == 4);
        double e = 0.0;
        for (const auto &rec : r.records)
            e += rec.err_norm;
        CHECK(e / 4.0 < 1e-2);
    }
}
