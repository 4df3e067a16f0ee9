// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file tensor_core.hpp
 * @brief Occupation-representation tensors of Slater determinants and their
 *        superpositions.
 *
 * A state of N fermions in L orthonormal basis orbitals is stored as a dense
 * array of 2^L real coefficients indexed by occupation bitstrings
 * (mu_1, ..., mu_L). Site 0 (mu_1) is the most significant bit of the index,
 * so the matricization at cut k places sites 0..k-1 on the row index.
 *
 * Orderings are permutations `perm` with perm[p] = old label of the orbital
 * placed at new position p. Reordering a fermionic state picks up the sign of
 * the permutation that sorts the occupied labels, which makes apply_ordering
 * agree exactly with rebuilding the determinant from permuted columns.
 */

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "slatertt/combinatorics.hpp"

namespace slatertt {

inline constexpr int kDefaultMaxSites = 20;
inline constexpr double kIsometryTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kSectorTolerance = 1e-14;

/// N x L matrix with orthonormal rows: coefficients of N orbitals in an L-orbital basis.
/// Column j (u_j) weights basis site j.
class PartialIsometry {
public:
    /// Validates U U^T = Id within kIsometryTolerance (Frobenius) and 1 <= N <= L <= max_sites.
    static PartialIsometry from_matrix(Eigen::MatrixXd u, int max_sites = kDefaultMaxSites);

    int num_particles() const noexcept { return static_cast<int>(u_.rows()); }
    int num_sites() const noexcept { return static_cast<int>(u_.cols()); }
    const Eigen::MatrixXd& matrix() const noexcept { return u_; }
    auto column(int j) const { return u_.col(j); }

    /// Rows selected by `rows` (ascending); the result is again a partial isometry.
    PartialIsometry row_subset(std::span<const int> rows) const;

private:
    explicit PartialIsometry(Eigen::MatrixXd u) : u_(std::move(u)) {}
    Eigen::MatrixXd u_;
};

/// Permutation of the L basis labels; perm[p] is the old label placed at position p.
class Ordering {
public:
    static Ordering identity(int num_sites);
    static Ordering from_permutation(std::vector<int> perm);

    int num_sites() const noexcept { return static_cast<int>(perm_.size()); }
    const std::vector<int>& permutation() const noexcept { return perm_; }
    int operator[](int position) const { return perm_[position]; }

    /// position_of()[label] = new position of `label`.
    std::vector<int> position_of() const;
    Ordering inverse() const;
    /// Applying `*this` and then `next` equals applying the returned ordering.
    Ordering then(const Ordering& next) const;

    bool operator==(const Ordering&) const = default;

private:
    explicit Ordering(std::vector<int> perm) : perm_(std::move(perm)) {}
    std::vector<int> perm_;
};

/// 2^L coefficients of an N-particle state in the occupation representation.
class OccupationTensor {
public:
    /// Validates the particle-number sector and unit norm.
    static OccupationTensor from_coefficients(int num_sites, int num_particles,
                                              std::vector<double> coefficients);
    /// No invariant checks; used for deliberately malformed inputs and scratch tensors.
    static OccupationTensor unchecked(int num_sites, int num_particles,
                                      std::vector<double> coefficients);

    int num_sites() const noexcept { return num_sites_; }
    int num_particles() const noexcept { return num_particles_; }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double operator[](Index x) const { return coeffs_[x]; }
    Index size() const noexcept { return coeffs_.size(); }

    double norm() const;
    /// Largest |coefficient| outside the N-particle sector.
    double max_off_sector() const;

private:
    OccupationTensor(int l, int n, std::vector<double> c)
        : num_sites_(l), num_particles_(n), coeffs_(std::move(c)) {}

    int num_sites_ = 0;
    int num_particles_ = 0;
    std::vector<double> coeffs_;
};

struct DeterminantTerm {
    double amplitude = 0.0;
    Subset orbitals;  ///< sorted rows of the orbital matrix, size N
};

/// Normalized superposition sum_I alpha_I |psi_{i_1}, ..., psi_{i_N}> over a
/// shared family of M orthonormal orbitals.
class CorrelatedState {
public:
    static CorrelatedState create(PartialIsometry orbitals, std::vector<DeterminantTerm> terms);

    const PartialIsometry& orbitals() const noexcept { return orbitals_; }
    const std::vector<DeterminantTerm>& terms() const noexcept { return terms_; }
    int num_particles() const noexcept { return static_cast<int>(terms_.front().orbitals.size()); }
    int num_sites() const noexcept { return orbitals_.num_sites(); }

    /// Index of the term with the largest |amplitude| (first on ties).
    std::size_t dominant_term() const;
    /// Orbital matrix restricted to the rows of term `t`.
    PartialIsometry term_isometry(std::size_t t) const;

private:
    CorrelatedState(PartialIsometry o, std::vector<DeterminantTerm> t)
        : orbitals_(std::move(o)), terms_(std::move(t)) {}

    PartialIsometry orbitals_;
    std::vector<DeterminantTerm> terms_;
};

/// Coefficient at each N-subset = det of the corresponding N x N column block of U.
OccupationTensor slater_coefficients(const PartialIsometry& u, int max_sites = kDefaultMaxSites);

/// sum_I alpha_I * slater_coefficients(rows I); the norm is re-checked to 1e-8.
OccupationTensor correlated_tensor(const CorrelatedState& state, int max_sites = kDefaultMaxSites);

/// Occupation tensor of the same state in the reordered basis (fermionic sign included).
OccupationTensor apply_ordering(const OccupationTensor& t, const Ordering& ordering);

/// Columns of U rearranged so that new column p is old column ordering[p].
PartialIsometry permute_columns(const PartialIsometry& u, const Ordering& ordering);
CorrelatedState permute_sites(const CorrelatedState& state, const Ordering& ordering);

/// 2^k x 2^(L-k) matricization; row index = (mu_1..mu_k), column index = (mu_{k+1}..mu_L).
Eigen::MatrixXd reshape(const OccupationTensor& t, int k);

/// Particle-number blocks C_0..C_min(k,N) of the cut-k matricization. C_j has rows
/// indexed by j-subsets of the left sites and columns by (N-j)-subsets of the right
/// sites, both lexicographic. Throws ConsistencyError if the tensor leaves its sector.
std::vector<Eigen::MatrixXd> sector_blocks(const OccupationTensor& t, int k);

/// Throws ValidationError unless 1 <= k <= L-1.
void check_cut(int num_sites, int k);

}  // namespace slatertt
