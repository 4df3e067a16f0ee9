// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectra.hpp
 * @brief Singular values of occupation-tensor matricizations.
 *
 * For a Slater determinant the cut-k singular values come in inverse pairs:
 * sigma_j^2 * sigma_{d+1-j}^2 equals the ordering-dependent prefactor p for
 * every j, where d = 2^min(k, L-k, N, L-N) is the generic rank. Three routes
 * to the same spectrum are provided:
 *
 *  - cut_spectrum_dense:  SVD of the full 2^k x 2^(L-k) reshape (the oracle),
 *  - cut_spectrum_sectors: SVD of each particle-number block C_j,
 *  - slater_cut_spectrum_block: the compound-matrix form det(Gram) * Lambda^j(...)
 *    built from U alone, without forming the tensor.
 */

#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "slatertt/tensor_core.hpp"

namespace slatertt {

/// Relative threshold (times the largest value) for counting a singular value as nonzero.
inline constexpr double kRankThreshold = 1e-12;
/// Smallest singular value of V_k / W_k accepted by the block formulas.
inline constexpr double kAssumptionCutoff = 1e-10;

struct CutSpectrum {
    int cut = 0;
    int num_sites = 0;
    int num_particles = 0;
    std::vector<double> values;      ///< descending, length min(2^k, 2^(L-k))
    int rank = 0;                    ///< count above kRankThreshold * values[0]
    std::optional<double> prefactor; ///< Slater states only

    /// Generic (Assumption-1) rank 2^min(k, L-k, N, L-N).
    std::uint64_t nominal_rank() const;
    double sum_of_squares() const;
};

/// Builds a CutSpectrum from raw values: sorts, clamps negatives to zero, pads with
/// zeros to min(2^k, 2^(L-k)) and counts the numerical rank.
CutSpectrum make_spectrum(int num_sites, int num_particles, int k, std::vector<double> values);

CutSpectrum cut_spectrum_dense(const OccupationTensor& t, int k);
CutSpectrum cut_spectrum_sectors(const OccupationTensor& t, int k);

/// Same multiset as the dense spectrum, from U via compound-matrix Gram forms.
/// Requires k <= L-N or k >= N, and full-rank V_k / W_k (DegeneracyError otherwise).
CutSpectrum slater_cut_spectrum_block(const PartialIsometry& u, int k);

/// Smallest singular values of V_k (left columns) and W_k (right columns).
std::pair<double, double> assumption_margins(const PartialIsometry& u, int k);

/// The invariant p(k, L, N) = det(Gram(V_k)) det(Gram(W_k)), each Gram taken in its
/// smaller dimension. Non-negative; zero when a block is rank-deficient.
double prefactor(const PartialIsometry& u, int k);

/// Prefactor of the bipartition that puts `left` (sorted) before its complement.
/// `u` must have orthonormal rows.
double bipartition_prefactor(const Eigen::Ref<const Eigen::MatrixXd>& u, std::span<const int> left);

/// max_j |sigma_j^2 sigma_{d+1-j}^2 - p| / max(p, 1e-300) over j = 1..d (nominal rank).
double check_inversion_symmetry(const CutSpectrum& s);

/// j-th compound matrix: all j x j minors of a square matrix, subsets in lexicographic order.
Eigen::MatrixXd compound_matrix(const Eigen::Ref<const Eigen::MatrixXd>& a, int j);

struct CauchyBinetSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the signed block-determinant refinement of Cauchy-Binet:
///   sum_{S subset U_set, |S| = m-j} det(A[:, S u T]) det(B[S u T, :])
///   = (-1)^j det [[0_j, B[T, :]], [A[:, T], A[:, U_set] B[U_set, :]]].
/// A is m x n, B is n x m; T and U_set are disjoint with |T| = j, |U_set| = n - j.
CauchyBinetSides modified_cauchy_binet(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                       const Eigen::Ref<const Eigen::MatrixXd>& b,
                                       std::span<const int> t_set,
                                       std::span<const int> u_set);

/// Third-order TT core: one r_{k-1} x r_k matrix per occupation value.
struct TTCore {
    std::array<Eigen::MatrixXd, 2> slice;
    Eigen::Index left_rank() const { return slice[0].rows(); }
    Eigen::Index right_rank() const { return slice[0].cols(); }
};

struct TTDecomposition {
    std::vector<TTCore> cores;
    std::vector<int> ranks;              ///< r_1 .. r_{L-1}
    std::vector<double> discarded;       ///< sum of discarded sigma^2 per cut
    double truncation_threshold = 0.0;

    int max_rank() const;
    double discarded_norm() const;       ///< sqrt(sum of discarded sigma^2)
};

/// Left-to-right successive SVD. At each cut values at or below
/// max(eps, kRankThreshold) * sigma_max are discarded.
TTDecomposition tt_decompose(const OccupationTensor& t, double eps);

/// Dense 2^L coefficients of A_1[mu_1] ... A_L[mu_L].
std::vector<double> tt_contract(const TTDecomposition& tt);

struct WeylAssignment {
    int j = 0;               ///< 1-based singular value index of the superposition
    std::vector<int> parts;  ///< per-term indices j_I >= 0 with sum j_I = j
};

/// max over assignments of sigma_j - sum_I |alpha_I| sigma^{(I)}_{max(j_I, 1)}.
/// Indices beyond a component spectrum contribute zero.
double weyl_bound_check(std::span<const CutSpectrum> components,
                        std::span<const double> amplitudes,
                        const CutSpectrum& total,
                        std::span<const WeylAssignment> assignments);

/// Uniformly random weak compositions of j into `terms` non-negative parts.
std::vector<WeylAssignment> random_compositions(int j, int terms, int count, std::mt19937_64& rng);

}  // namespace slatertt
