// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rdm.hpp
 * @brief One- and two-orbital reduced density matrices, entropies and the
 *        mutual information graph.
 *
 * Two-orbital matrices use the basis (00, 01, 10, 11) where the first slot is
 * site i and the second site j (i < j). For a Slater determinant the matrix is
 * diagonal except for the (01, 10) coupling; the closed forms below evaluate
 * it from the columns u_i of U without building the tensor.
 */

#pragma once

#include <Eigen/Dense>

#include "slatertt/tensor_core.hpp"

namespace slatertt {

struct OrbitalRDM1 {
    int site = 0;
    Eigen::Matrix2d rho;
};

struct OrbitalRDM2 {
    int site_i = 0;
    int site_j = 0;
    Eigen::Matrix4d rho;
};

/// Symmetric L x L matrix of IM_ij = S_i + S_j - S_ij (zero diagonal), base-2 entropies.
struct MutualInfoGraph {
    Eigen::MatrixXd values;
    int num_sites() const { return static_cast<int>(values.rows()); }
};

OrbitalRDM1 rdm1_brute(const OccupationTensor& t, int i);
OrbitalRDM2 rdm2_brute(const OccupationTensor& t, int i, int j);

OrbitalRDM1 rdm1_slater(const PartialIsometry& u, int i);

/// Which formula evaluates the (01,10) coupling of a Slater two-orbital matrix.
enum class CouplingPath {
    automatic,    ///< adjacent / next-nearest / two-particle fast paths, else general
    general,      ///< signed block-determinant sum over subsets of the sites between i and j
    adjacent,     ///< j = i + 1: <u_i, u_j>
    next_nearest, ///< j = i + 2
    two_particle, ///< N = 2, any i < j
};

OrbitalRDM2 rdm2_slater(const PartialIsometry& u, int i, int j,
                        CouplingPath path = CouplingPath::automatic);

/// Off-diagonal rho(10, 01) of a Slater determinant via the requested path.
/// Throws ValidationError when the path does not apply to (i, j, N).
double slater_coupling(const PartialIsometry& u, int i, int j, CouplingPath path);

/// -sum lambda log2 lambda over eigenvalues clamped to [0, 1]. Requires a symmetric
/// matrix with unit trace (1e-8).
double von_neumann_entropy(const Eigen::Ref<const Eigen::MatrixXd>& rho);

/// Brute-force partial traces; valid for any tensor with definite particle number.
MutualInfoGraph mutual_information(const OccupationTensor& t);

/// Closed-form Slater reduced density matrices.
MutualInfoGraph mutual_information(const PartialIsometry& u);

}  // namespace slatertt
