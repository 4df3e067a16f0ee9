// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slatertt/errors.hpp"

namespace slatertt {

namespace {

void check_capacity(int num_sites, int max_sites) {
    if (num_sites > max_sites) {
        throw CapacityError("dense tensor over " + std::to_string(num_sites)
                            + " sites exceeds the cap of " + std::to_string(max_sites));
    }
}

}  // namespace

void check_cut(int num_sites, int k) {
    if (k < 1 || k > num_sites - 1) {
        throw ValidationError("cut index " + std::to_string(k) + " outside [1, "
                              + std::to_string(num_sites - 1) + "]");
    }
}

// ---------------------------------------------------------------------------
// PartialIsometry
// ---------------------------------------------------------------------------

PartialIsometry PartialIsometry::from_matrix(Eigen::MatrixXd u, int max_sites) {
    const auto n = u.rows();
    const auto l = u.cols();
    if (n < 1 || n > l) {
        throw ValidationError("partial isometry needs 1 <= N <= L, got N=" + std::to_string(n)
                              + ", L=" + std::to_string(l));
    }
    check_capacity(static_cast<int>(l), max_sites);
    if (!u.allFinite()) throw ValidationError("partial isometry has non-finite entries");
    const double residual =
        (u * u.transpose() - Eigen::MatrixXd::Identity(n, n)).norm();
    if (residual > kIsometryTolerance) {
        throw ValidationError("rows are not orthonormal: |U U^T - Id|_F = "
                              + std::to_string(residual));
    }
    return PartialIsometry(std::move(u));
}

PartialIsometry PartialIsometry::row_subset(std::span<const int> rows) const {
    for (int r : rows) {
        if (r < 0 || r >= num_particles()) {
            throw ValidationError("orbital index " + std::to_string(r) + " out of range");
        }
    }
    return PartialIsometry(select_rows(u_, rows));
}

// ---------------------------------------------------------------------------
// Ordering
// ---------------------------------------------------------------------------

Ordering Ordering::identity(int num_sites) {
    std::vector<int> p(num_sites);
    std::iota(p.begin(), p.end(), 0);
    return Ordering(std::move(p));
}

Ordering Ordering::from_permutation(std::vector<int> perm) {
    std::vector<char> seen(perm.size(), 0);
    for (int v : perm) {
        if (v < 0 || v >= static_cast<int>(perm.size()) || seen[v]) {
            throw ValidationError("not a permutation of 0.." + std::to_string(perm.size() - 1));
        }
        seen[v] = 1;
    }
    return Ordering(std::move(perm));
}

std::vector<int> Ordering::position_of() const {
    std::vector<int> pos(perm_.size());
    for (std::size_t p = 0; p < perm_.size(); ++p) pos[perm_[p]] = static_cast<int>(p);
    return pos;
}

Ordering Ordering::inverse() const { return Ordering(position_of()); }

Ordering Ordering::then(const Ordering& next) const {
    if (next.num_sites() != num_sites()) throw ValidationError("ordering size mismatch");
    std::vector<int> c(perm_.size());
    for (std::size_t p = 0; p < perm_.size(); ++p) c[p] = perm_[next.perm_[p]];
    return Ordering(std::move(c));
}

// ---------------------------------------------------------------------------
// OccupationTensor
// ---------------------------------------------------------------------------

OccupationTensor OccupationTensor::unchecked(int num_sites, int num_particles,
                                             std::vector<double> coefficients) {
    if (num_sites < 1 || num_sites > 62) throw ValidationError("invalid site count");
    if (coefficients.size() != (Index{1} << num_sites)) {
        throw ValidationError("expected 2^L coefficients");
    }
    return OccupationTensor(num_sites, num_particles, std::move(coefficients));
}

OccupationTensor OccupationTensor::from_coefficients(int num_sites, int num_particles,
                                                     std::vector<double> coefficients) {
    auto t = unchecked(num_sites, num_particles, std::move(coefficients));
    if (num_particles < 0 || num_particles > num_sites) {
        throw ValidationError("particle number outside [0, L]");
    }
    if (t.max_off_sector() > kSectorTolerance) {
        throw ConsistencyError("coefficients outside the N-particle sector");
    }
    if (std::abs(t.norm() - 1.0) > kNormTolerance) {
        throw ConsistencyError("tensor is not normalized: |T| = " + std::to_string(t.norm()));
    }
    return t;
}

double OccupationTensor::norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
}

double OccupationTensor::max_off_sector() const {
    double m = 0.0;
    for (Index x = 0; x < coeffs_.size(); ++x) {
        if (popcount(x) != num_particles_) m = std::max(m, std::abs(coeffs_[x]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// CorrelatedState
// ---------------------------------------------------------------------------

CorrelatedState CorrelatedState::create(PartialIsometry orbitals,
                                        std::vector<DeterminantTerm> terms) {
    if (terms.empty()) throw ValidationError("correlated state needs at least one term");
    const auto n = terms.front().orbitals.size();
    double weight = 0.0;
    for (const auto& t : terms) {
        if (t.orbitals.size() != n || n == 0) {
            throw ValidationError("all determinant terms need the same particle number");
        }
        if (!std::is_sorted(t.orbitals.begin(), t.orbitals.end())
            || std::adjacent_find(t.orbitals.begin(), t.orbitals.end()) != t.orbitals.end()) {
            throw ValidationError("term orbital indices must be strictly increasing");
        }
        if (t.orbitals.front() < 0 || t.orbitals.back() >= orbitals.num_particles()) {
            throw ValidationError("term orbital index out of range");
        }
        if (!std::isfinite(t.amplitude)) throw ValidationError("non-finite amplitude");
        weight += t.amplitude * t.amplitude;
    }
    for (std::size_t a = 0; a < terms.size(); ++a) {
        for (std::size_t b = a + 1; b < terms.size(); ++b) {
            if (terms[a].orbitals == terms[b].orbitals) {
                throw ValidationError("duplicate determinant term");
            }
        }
    }
    if (std::abs(weight - 1.0) > kNormTolerance) {
        throw ValidationError("squared amplitudes sum to " + std::to_string(weight));
    }
    return CorrelatedState(std::move(orbitals), std::move(terms));
}

std::size_t CorrelatedState::dominant_term() const {
    std::size_t best = 0;
    for (std::size_t t = 1; t < terms_.size(); ++t) {
        if (std::abs(terms_[t].amplitude) > std::abs(terms_[best].amplitude)) best = t;
    }
    return best;
}

PartialIsometry CorrelatedState::term_isometry(std::size_t t) const {
    return orbitals_.row_subset(terms_.at(t).orbitals);
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace {

// Unnormalized determinant expansion, accumulated into `out` with weight `scale`.
void accumulate_slater(const Eigen::MatrixXd& u, double scale, std::vector<double>& out) {
    const int n = static_cast<int>(u.rows());
    const int l = static_cast<int>(u.cols());
    Subset s(n);
    std::iota(s.begin(), s.end(), 0);
    Eigen::MatrixXd block(n, n);
    do {
        for (int c = 0; c < n; ++c) block.col(c) = u.col(s[c]);
        out[index_from_sites(s, l)] += scale * determinant(block);
    } while (next_subset(s, l));
}

}  // namespace

OccupationTensor slater_coefficients(const PartialIsometry& u, int max_sites) {
    const int l = u.num_sites();
    check_capacity(l, max_sites);
    std::vector<double> c(Index{1} << l, 0.0);
    accumulate_slater(u.matrix(), 1.0, c);
    auto t = OccupationTensor::unchecked(l, u.num_particles(), std::move(c));
    // Cauchy-Binet: sum of squared maximal minors = det(U U^T) = 1.
    if (std::abs(t.norm() - 1.0) > kNormTolerance) {
        throw ConsistencyError("Slater tensor norm " + std::to_string(t.norm())
                               + " deviates from 1");
    }
    return t;
}

OccupationTensor correlated_tensor(const CorrelatedState& state, int max_sites) {
    const int l = state.num_sites();
    check_capacity(l, max_sites);
    std::vector<double> c(Index{1} << l, 0.0);
    for (std::size_t t = 0; t < state.terms().size(); ++t) {
        const auto rows = select_rows(state.orbitals().matrix(), state.terms()[t].orbitals);
        accumulate_slater(rows, state.terms()[t].amplitude, c);
    }
    auto out = OccupationTensor::unchecked(l, state.num_particles(), std::move(c));
    if (std::abs(out.norm() - 1.0) > 1e-8) {
        throw ConsistencyError("superposition norm " + std::to_string(out.norm())
                               + " deviates from 1; orbital rows are not orthonormal");
    }
    return out;
}

OccupationTensor apply_ordering(const OccupationTensor& t, const Ordering& ordering) {
    const int l = t.num_sites();
    if (ordering.num_sites() != l) throw ValidationError("ordering size does not match tensor");
    const auto pos = ordering.position_of();
    std::vector<double> out(t.size(), 0.0);
    std::vector<int> q;
    q.reserve(l);
    for (Index x = 0; x < t.size(); ++x) {
        const double c = t[x];
        if (c == 0.0) continue;
        q.clear();
        Index y = 0;
        for (int s = 0; s < l; ++s) {
            if (occupied(x, s, l)) {
                q.push_back(pos[s]);
                y |= site_bit(pos[s], l);
            }
        }
        int inversions = 0;
        for (std::size_t a = 0; a < q.size(); ++a) {
            for (std::size_t b = a + 1; b < q.size(); ++b) inversions += q[a] > q[b];
        }
        out[y] = (inversions % 2 == 0) ? c : -c;
    }
    return OccupationTensor::unchecked(l, t.num_particles(), std::move(out));
}

PartialIsometry permute_columns(const PartialIsometry& u, const Ordering& ordering) {
    if (ordering.num_sites() != u.num_sites()) throw ValidationError("ordering size mismatch");
    return PartialIsometry::from_matrix(select_columns(u.matrix(), ordering.permutation()),
                                        std::max(u.num_sites(), kDefaultMaxSites));
}

CorrelatedState permute_sites(const CorrelatedState& state, const Ordering& ordering) {
    return CorrelatedState::create(permute_columns(state.orbitals(), ordering), state.terms());
}

Eigen::MatrixXd reshape(const OccupationTensor& t, int k) {
    const int l = t.num_sites();
    check_cut(l, k);
    const Index rows = Index{1} << k;
    const Index cols = Index{1} << (l - k);
    Eigen::MatrixXd m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) m(r, c) = t[(r << (l - k)) | c];
    }
    return m;
}

std::vector<Eigen::MatrixXd> sector_blocks(const OccupationTensor& t, int k) {
    const int l = t.num_sites();
    const int n = t.num_particles();
    check_cut(l, k);
    if (t.max_off_sector() > kSectorTolerance) {
        throw ConsistencyError("tensor has weight outside its particle-number sector");
    }
    std::vector<Eigen::MatrixXd> blocks;
    for (int j = 0; j <= std::min(k, n); ++j) {
        const auto left = subsets_lex(k, j);
        const auto right = subsets_lex(l - k, n - j);
        Eigen::MatrixXd c(static_cast<Eigen::Index>(left.size()),
                          static_cast<Eigen::Index>(right.size()));
        for (std::size_t a = 0; a < left.size(); ++a) {
            const Index hi = index_from_sites(left[a], k) << (l - k);
            for (std::size_t b = 0; b < right.size(); ++b) {
                c(a, b) = t[hi | index_from_sites(right[b], l - k)];
            }
        }
        blocks.push_back(std::move(c));
    }
    return blocks;
}

}  // namespace slatertt
