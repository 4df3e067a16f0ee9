// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "slatertt/errors.hpp"
#include "slatertt/experiments.hpp"
#include "slatertt/rdm.hpp"
#include "slatertt/spectra.hpp"

namespace slatertt {

namespace {

void record(SuiteResult& r, double err) {
    ++r.cases;
    r.max_error = std::max(r.max_error, err);
    if (!(err <= r.tolerance)) ++r.failures;
}

Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
    }
    return m;
}

}  // namespace

SuiteResult selftest_cauchy_binet(std::uint64_t seed, int cases) {
    SuiteResult r{"cauchy_binet", 0, 0, 0.0, 1e-10};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(1, 6);
    while (r.cases < cases) {
        int m = dim(rng);
        int n = dim(rng);
        if (m > n) std::swap(m, n);
        const auto a = gaussian(m, n, rng);
        const auto b = gaussian(n, m, rng);
        const int j = std::uniform_int_distribution<int>(0, m)(rng);
        std::vector<int> labels(n);
        for (int i = 0; i < n; ++i) labels[i] = i;
        std::shuffle(labels.begin(), labels.end(), rng);
        Subset t(labels.begin(), labels.begin() + j);
        Subset u(labels.begin() + j, labels.end());
        std::sort(t.begin(), t.end());
        std::sort(u.begin(), u.end());
        const auto sides = modified_cauchy_binet(a, b, t, u);
        record(r, std::abs(sides.lhs - sides.rhs) / std::max(1.0, std::abs(sides.lhs)));
    }
    return r;
}

SuiteResult selftest_block_spectrum(std::uint64_t seed, int cases) {
    SuiteResult r{"block_spectrum", 0, 0, 0.0, 1e-9};
    std::mt19937_64 rng(seed);
    while (r.cases < cases) {
        const int l = std::uniform_int_distribution<int>(2, 12)(rng);
        const int n = std::uniform_int_distribution<int>(1, std::min(5, l - 1))(rng);
        const auto u = random_partial_isometry(n, l, rng());
        const auto t = slater_coefficients(u);
        double worst = 0.0;
        for (int k = 1; k < l; ++k) {
            if (!(k <= l - n || k >= n)) continue;
            const auto dense = cut_spectrum_dense(t, k);
            CutSpectrum block;
            try {
                block = slater_cut_spectrum_block(u, k);
            } catch (const DegeneracyError&) {
                continue;
            }
            for (std::size_t i = 0; i < dense.values.size(); ++i) {
                worst = std::max(worst, std::abs(dense.values[i] - block.values[i]));
            }
        }
        record(r, worst);
    }
    return r;
}

SuiteResult selftest_rdm(std::uint64_t seed, int cases) {
    SuiteResult r{"rdm_closed_form", 0, 0, 0.0, 1e-10};
    std::mt19937_64 rng(seed);
    while (r.cases < cases) {
        const int l = std::uniform_int_distribution<int>(2, 10)(rng);
        const int n = std::uniform_int_distribution<int>(1, l - 1)(rng);
        const auto u = random_partial_isometry(n, l, rng());
        const auto t = slater_coefficients(u);
        const int i = std::uniform_int_distribution<int>(0, l - 2)(rng);
        const int j = std::uniform_int_distribution<int>(i + 1, l - 1)(rng);
        double err = (rdm2_slater(u, i, j, CouplingPath::general).rho - rdm2_brute(t, i, j).rho)
                         .cwiseAbs()
                         .maxCoeff();
        // fast paths must match the general sum to a tighter tolerance
        const double general = slater_coupling(u, i, j, CouplingPath::general);
        double path_err = 0.0;
        if (j == i + 1) path_err = std::abs(slater_coupling(u, i, j, CouplingPath::adjacent) - general);
        if (j == i + 2) path_err = std::abs(slater_coupling(u, i, j, CouplingPath::next_nearest) - general);
        if (n == 2) {
            path_err = std::max(path_err,
                                std::abs(slater_coupling(u, i, j, CouplingPath::two_particle) - general));
        }
        if (path_err > 1e-12) err = std::max(err, 1.0);
        record(r, err);
    }
    return r;
}

std::vector<SuiteResult> run_selftest(std::uint64_t seed, double scale) {
    auto count = [&](int base) { return std::max(1, static_cast<int>(std::lround(base * scale))); };
    return {selftest_cauchy_binet(splitmix64(seed + 1), count(1000)),
            selftest_block_spectrum(splitmix64(seed + 2), count(200)),
            selftest_rdm(splitmix64(seed + 3), count(200))};
}

}  // namespace slatertt
