// SPDX-License-Identifier: Apache-2.0
// acs - FDD massive MIMO covariance extrapolation and active channel sparsification
// Copyright (C) 2026 The acs authors
// ----------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace acs
{

// Precondition violated by the caller.
class InvalidArgument : public std::invalid_argument
{
public:
    explicit InvalidArgument(const std::string &what) : std::invalid_argument(what) {}
};

// Iteration cap hit, singular system, or other loss of numerical control.
class NumericalFailure : public std::runtime_error
{
public:
    explicit NumericalFailure(const std::string &what) : std::runtime_error(what) {}
};

} // namespace acs
