// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ordering.hpp
 * @brief Orbital ordering schemes: canonical, Fiedler, best prefactor
 *        (exhaustive and simulated annealing) and best weighted prefactor.
 *
 * The prefactor objectives depend only on which labels end up left of the cut,
 * so the subset-based methods return an ordering with the selected labels first
 * (ascending) followed by the complement (ascending).
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slatertt/rdm.hpp"
#include "slatertt/tensor_core.hpp"

namespace slatertt {

enum class OrderingMethod {
    canonical,
    fiedler,
    prefactor_exact,
    prefactor_anneal,
    weighted_prefactor,
    weighted_prefactor_anneal,
};

std::string_view to_string(OrderingMethod m);
OrderingMethod ordering_method_from_string(std::string_view s);

struct OrderingResult {
    Ordering ordering;
    OrderingMethod method = OrderingMethod::canonical;
    std::optional<double> objective;     ///< prefactor / weighted prefactor
    std::optional<Subset> bipartition;   ///< labels placed left of the cut
    std::optional<std::uint64_t> seed;   ///< annealing only
    std::vector<std::string> warnings;
};

enum class WarmStart { fiedler, canonical, random };

struct AnnealConfig {
    double initial_temperature = 1.0;
    double decay = 0.99;
    /// 0 selects ceil(C(L, size) / 2).
    std::uint64_t max_iterations = 0;
    std::uint64_t seed = 0;
    WarmStart warm_start = WarmStart::fiedler;

    void validate() const;
};

inline constexpr std::uint64_t kDefaultExhaustiveCap = 1'000'000;

OrderingResult canonical_order(int num_sites);

/// Sorts the Fiedler vector of the IM graph Laplacian ascending (ties by label).
/// The eigenvector sign is fixed so its first entry of largest magnitude is positive.
OrderingResult fiedler_order(const MutualInfoGraph& im);

/// Global minimum of the prefactor over all subsets of `subset_size` labels
/// (0 selects N). Ties resolve to the lexicographically first subset.
OrderingResult best_prefactor_exhaustive(const PartialIsometry& u, int subset_size = 0,
                                         std::uint64_t cap = kDefaultExhaustiveCap);

/// Simulated annealing over subsets (swap one active and one virtual label; Metropolis
/// acceptance exp(-delta / tau)). Returns the best subset seen.
OrderingResult anneal_prefactor(const PartialIsometry& u, const AnnealConfig& cfg,
                                std::optional<Subset> initial = std::nullopt,
                                int subset_size = 0);

/// sum_I |alpha_I| p_I over the cut-k bipartition for each term's determinant.
double weighted_prefactor(const CorrelatedState& state, std::span<const int> left);

/// Exhaustive minimization of the weighted objective over k-label bipartitions
/// (k = 0 selects L/2).
OrderingResult best_weighted_prefactor(const CorrelatedState& state, int k = 0,
                                       std::uint64_t cap = kDefaultExhaustiveCap);

/// Annealing variant of best_weighted_prefactor for large C(L, k).
OrderingResult anneal_weighted_prefactor(const CorrelatedState& state, const AnnealConfig& cfg,
                                         int k = 0, std::optional<Subset> initial = std::nullopt);

/// Ordering that puts `left` (sorted) first and its complement after, both ascending.
Ordering bipartition_ordering(std::span<const int> left, int num_sites);

}  // namespace slatertt
