// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace slatertt {

using Index = std::uint64_t;
using Subset = std::vector<int>;

/// Binomial coefficient C(n, k); 0 outside 0 <= k <= n.
std::uint64_t binomial(int n, int k);

/// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<Subset> subsets_lex(int n, int k);

/// Advances `s` (a sorted k-subset of {0..n-1}) to its lexicographic successor.
/// Returns false once `s` was the last subset.
bool next_subset(Subset& s, int n);

/// Position of `s` among the lexicographically ordered k-subsets of {0..n-1}.
std::uint64_t subset_rank(std::span<const int> s, int n);

inline int popcount(Index x) noexcept { return std::popcount(x); }

/// Bit that carries site `site` (0-based) in an L-site index; site 0 is the most
/// significant bit.
inline Index site_bit(int site, int num_sites) noexcept {
    return Index{1} << (num_sites - 1 - site);
}

inline bool occupied(Index x, int site, int num_sites) noexcept {
    return (x & site_bit(site, num_sites)) != 0;
}

/// Index with ones exactly at the given sites.
Index index_from_sites(std::span<const int> sites, int num_sites);

/// Occupied sites of `x`, ascending.
Subset sites_from_index(Index x, int num_sites);

/// Determinant through partial-pivot LU; 1 for an empty matrix.
double determinant(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Columns of `a` selected by `cols`, in the given order.
Eigen::MatrixXd select_columns(const Eigen::Ref<const Eigen::MatrixXd>& a,
                               std::span<const int> cols);

/// Rows of `a` selected by `rows`, in the given order.
Eigen::MatrixXd select_rows(const Eigen::Ref<const Eigen::MatrixXd>& a,
                            std::span<const int> rows);

/// Complement of a sorted subset in {0..n-1}, ascending.
Subset complement(std::span<const int> s, int n);

}  // namespace slatertt
