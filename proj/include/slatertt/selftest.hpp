// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file selftest.hpp
 * @brief Randomized oracle suites comparing closed forms against brute force.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slatertt {

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    double max_error = 0.0;
    double tolerance = 0.0;

    bool passed() const noexcept { return failures == 0 && cases > 0; }
};

/// cauchy_binet: both sides of the block-determinant identity, m, n <= 6, every
/// admissible j (relative 1e-10).
SuiteResult selftest_cauchy_binet(std::uint64_t seed, int cases = 1000);

/// block_spectrum: compound-matrix spectrum vs dense SVD, N <= 5, L <= 12 (1e-9).
SuiteResult selftest_block_spectrum(std::uint64_t seed, int cases = 200);

/// rdm_closed_form: Slater two-orbital matrices vs partial traces (1e-10) and the
/// fast coupling paths vs the general sum (1e-12).
SuiteResult selftest_rdm(std::uint64_t seed, int cases = 200);

/// All three suites; `scale` multiplies the default case counts (minimum one case).
std::vector<SuiteResult> run_selftest(std::uint64_t seed, double scale = 1.0);

}  // namespace slatertt
