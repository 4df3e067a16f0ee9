// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "slatertt/tensor_core.hpp"

namespace testing {

inline slatertt::PartialIsometry random_u(int n, int l, std::mt19937_64& rng) {
    return slatertt::PartialIsometry::from_matrix(oracle::random_isometry(n, l, rng));
}

/// H2 orbitals in the order (A up, A down, B up, B down).
inline Eigen::MatrixXd h2_orbitals(double c, double s, double cp, double sp) {
    Eigen::MatrixXd u(2, 4);
    u << c, 0, s, 0,
         0, cp, 0, sp;
    return u;
}

inline std::vector<double> coefficients(const slatertt::OccupationTensor& t) {
    return {t.coefficients().begin(), t.coefficients().end()};
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace testing
