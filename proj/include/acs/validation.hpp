// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace acs
{

struct ValidationOptions
{
    // Replaces every suite tolerance with -infinity so each suite must fail.
    // Used to check that the harness actually reports failures.
    bool inject_fault = false;
};

struct SuiteResult
{
    std::string name;
    std::string title;
    bool passed = false;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0;     // largest observed value of the suite metric
    double tolerance = 0.0; // pass when worst <= tolerance
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics; // extra figures for reports
};

// matching, sparsify, integrality, stability, szego, projection, nnls, extrapolation
const std::vector<std::string> &suite_names();

// Throws InvalidArgument for an unknown name.
SuiteResult run_suite(const std::string &name, const ValidationOptions &options = {});

// Fixed-width table, one row per suite.
std::string format_suite_table(const std::vector<SuiteResult> &results);

} // namespace acs
