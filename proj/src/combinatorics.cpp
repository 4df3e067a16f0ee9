// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/combinatorics.hpp"

#include <numeric>

namespace slatertt {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

bool next_subset(Subset& s, int n) {
    const int k = static_cast<int>(s.size());
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) return false;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    return true;
}

std::vector<Subset> subsets_lex(int n, int k) {
    std::vector<Subset> out;
    if (k < 0 || k > n) return out;
    out.reserve(binomial(n, k));
    Subset s(k);
    std::iota(s.begin(), s.end(), 0);
    do {
        out.push_back(s);
    } while (next_subset(s, n));
    return out;
}

std::uint64_t subset_rank(std::span<const int> s, int n) {
    // Count subsets that precede s: for each position, all smaller choices.
    const int k = static_cast<int>(s.size());
    std::uint64_t rank = 0;
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < s[i]; ++v) rank += binomial(n - v - 1, k - i - 1);
        prev = s[i];
    }
    return rank;
}

Index index_from_sites(std::span<const int> sites, int num_sites) {
    Index x = 0;
    for (int s : sites) x |= site_bit(s, num_sites);
    return x;
}

Subset sites_from_index(Index x, int num_sites) {
    Subset out;
    out.reserve(popcount(x));
    for (int s = 0; s < num_sites; ++s) {
        if (occupied(x, s, num_sites)) out.push_back(s);
    }
    return out;
}

double determinant(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    if (a.rows() == 0) return 1.0;
    if (a.rows() == 1) return a(0, 0);
    if (a.rows() == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant();
}

Eigen::MatrixXd select_columns(const Eigen::Ref<const Eigen::MatrixXd>& a,
                               std::span<const int> cols) {
    Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = a.col(cols[c]);
    return out;
}

Eigen::MatrixXd select_rows(const Eigen::Ref<const Eigen::MatrixXd>& a,
                            std::span<const int> rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), a.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = a.row(rows[r]);
    return out;
}

Subset complement(std::span<const int> s, int n) {
    Subset out;
    out.reserve(n - s.size());
    std::size_t pos = 0;
    for (int v = 0; v < n; ++v) {
        if (pos < s.size() && s[pos] == v) {
            ++pos;
        } else {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace slatertt
