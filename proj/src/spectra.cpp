// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slatertt/errors.hpp"

namespace slatertt {

namespace {

Eigen::VectorXd singular_values(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

double smallest_singular_value(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    const auto s = singular_values(m);
    return s.size() == 0 ? 0.0 : s.minCoeff();
}

// det of the Gram matrix of X taken in its smaller dimension.
double small_gram_det(const Eigen::Ref<const Eigen::MatrixXd>& x) {
    if (x.cols() <= x.rows()) return determinant(x.transpose() * x);
    return determinant(x * x.transpose());
}

// All order x order minors of a rectangular matrix; rows and columns in lexicographic
// subset order. Order 0 gives the 1 x 1 identity.
Eigen::MatrixXd rectangular_compound(const Eigen::Ref<const Eigen::MatrixXd>& a, int order) {
    const auto rows = subsets_lex(static_cast<int>(a.rows()), order);
    const auto cols = subsets_lex(static_cast<int>(a.cols()), order);
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Eigen::MatrixXd picked = select_rows(a, rows[r]);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out(r, c) = determinant(select_columns(picked, cols[c]));
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// CutSpectrum
// ---------------------------------------------------------------------------

std::uint64_t CutSpectrum::nominal_rank() const {
    const int e = std::min({cut, num_sites - cut, num_particles, num_sites - num_particles});
    return std::uint64_t{1} << std::max(e, 0);
}

double CutSpectrum::sum_of_squares() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
}

CutSpectrum make_spectrum(int num_sites, int num_particles, int k, std::vector<double> values) {
    check_cut(num_sites, k);
    for (double& v : values) v = std::max(v, 0.0);
    std::sort(values.begin(), values.end(), std::greater<>());
    const std::size_t length = std::size_t{1} << std::min(k, num_sites - k);
    values.resize(length, 0.0);

    CutSpectrum s;
    s.cut = k;
    s.num_sites = num_sites;
    s.num_particles = num_particles;
    const double cutoff = kRankThreshold * values.front();
    s.rank = static_cast<int>(
        std::count_if(values.begin(), values.end(), [&](double v) { return v > cutoff; }));
    s.values = std::move(values);
    return s;
}

CutSpectrum cut_spectrum_dense(const OccupationTensor& t, int k) {
    const auto s = singular_values(reshape(t, k));
    return make_spectrum(t.num_sites(), t.num_particles(), k,
                         std::vector<double>(s.data(), s.data() + s.size()));
}

CutSpectrum cut_spectrum_sectors(const OccupationTensor& t, int k) {
    std::vector<double> all;
    for (const auto& block : sector_blocks(t, k)) {
        const auto s = singular_values(block);
        all.insert(all.end(), s.data(), s.data() + s.size());
    }
    return make_spectrum(t.num_sites(), t.num_particles(), k, std::move(all));
}

std::pair<double, double> assumption_margins(const PartialIsometry& u, int k) {
    check_cut(u.num_sites(), k);
    const auto& m = u.matrix();
    return {smallest_singular_value(m.leftCols(k)),
            smallest_singular_value(m.rightCols(u.num_sites() - k))};
}

CutSpectrum slater_cut_spectrum_block(const PartialIsometry& u, int k) {
    const int n = u.num_particles();
    const int l = u.num_sites();
    check_cut(l, k);
    if (k > l - n && k < n) {
        throw ValidationError("block formula needs k <= L-N or k >= N (k=" + std::to_string(k)
                              + ", N=" + std::to_string(n) + ", L=" + std::to_string(l) + ")");
    }
    const auto [left_margin, right_margin] = assumption_margins(u, k);
    if (left_margin <= kAssumptionCutoff) throw DegeneracyError("left (V_k)", left_margin);
    if (right_margin <= kAssumptionCutoff) throw DegeneracyError("right (W_k)", right_margin);

    const Eigen::MatrixXd v = u.matrix().leftCols(k);
    const Eigen::MatrixXd w = u.matrix().rightCols(l - k);

    // With G = R R^T (Cholesky) and X = R^{-1} Y, Cauchy-Binet gives
    // Lambda^j(Y^T G^{-1} Y) = Lambda^j(X)^T Lambda^j(X), so the block singular values
    // are sqrt(det G) times those of the rectangular compound Lambda^j(X).
    std::vector<double> values;
    auto collect = [&](const Eigen::MatrixXd& x, double det_g, int order) {
        const auto s = singular_values(rectangular_compound(x, order));
        for (Eigen::Index i = 0; i < s.size(); ++i) values.push_back(std::sqrt(det_g) * s(i));
    };

    if (k <= l - n) {
        // C_j C_j^T = det(W W^T) Lambda^j(V^T (W W^T)^{-1} V)
        const Eigen::MatrixXd g = w * w.transpose();
        const Eigen::LLT<Eigen::MatrixXd> llt(g);
        const Eigen::MatrixXd x = llt.matrixL().solve(v);
        const double det_g = std::max(determinant(g), 0.0);
        for (int j = 0; j <= std::min(k, n); ++j) collect(x, det_g, j);
    } else {
        // C_j^T C_j = det(V V^T) Lambda^{N-j}(W^T (V V^T)^{-1} W)
        const Eigen::MatrixXd g = v * v.transpose();
        const Eigen::LLT<Eigen::MatrixXd> llt(g);
        const Eigen::MatrixXd x = llt.matrixL().solve(w);
        const double det_g = std::max(determinant(g), 0.0);
        for (int j = 0; j <= std::min(k, n); ++j) {
            if (n - j > l - k) continue;
            collect(x, det_g, n - j);
        }
    }

    auto s = make_spectrum(l, n, k, std::move(values));
    s.prefactor = prefactor(u, k);
    return s;
}

// ---------------------------------------------------------------------------
// Prefactor and inversion symmetry
// ---------------------------------------------------------------------------

double prefactor(const PartialIsometry& u, int k) {
    check_cut(u.num_sites(), k);
    const auto& m = u.matrix();
    const double p = small_gram_det(m.leftCols(k)) * small_gram_det(m.rightCols(u.num_sites() - k));
    return std::max(p, 0.0);
}

double bipartition_prefactor(const Eigen::Ref<const Eigen::MatrixXd>& u, std::span<const int> left) {
    const auto right = complement(left, static_cast<int>(u.cols()));
    const double p = small_gram_det(select_columns(u, left)) * small_gram_det(select_columns(u, right));
    return std::max(p, 0.0);
}

double check_inversion_symmetry(const CutSpectrum& s) {
    if (!s.prefactor) throw ValidationError("inversion check needs a prefactor");
    const double p = *s.prefactor;
    const auto d = s.nominal_rank();
    const double scale = std::max(p, 1e-300);
    double worst = 0.0;
    for (std::uint64_t j = 0; j < d; ++j) {
        const double a = s.values[j];
        const double b = s.values[d - 1 - j];
        worst = std::max(worst, std::abs(a * a * b * b - p) / scale);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Compound matrices and Cauchy-Binet
// ---------------------------------------------------------------------------

Eigen::MatrixXd compound_matrix(const Eigen::Ref<const Eigen::MatrixXd>& a, int j) {
    if (a.rows() != a.cols()) throw ValidationError("compound matrix needs a square matrix");
    const int n = static_cast<int>(a.rows());
    if (j < 0 || j > n) throw ValidationError("compound order outside [0, n]");
    const auto subsets = subsets_lex(n, j);
    const auto size = static_cast<Eigen::Index>(subsets.size());
    Eigen::MatrixXd out(size, size);
    Eigen::MatrixXd minor(j, j);
    for (Eigen::Index r = 0; r < size; ++r) {
        for (Eigen::Index c = 0; c < size; ++c) {
            for (int x = 0; x < j; ++x) {
                for (int y = 0; y < j; ++y) minor(x, y) = a(subsets[r][x], subsets[c][y]);
            }
            out(r, c) = determinant(minor);
        }
    }
    return out;
}

CauchyBinetSides modified_cauchy_binet(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                       const Eigen::Ref<const Eigen::MatrixXd>& b,
                                       std::span<const int> t_set,
                                       std::span<const int> u_set) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    if (b.rows() != n || b.cols() != m) throw ValidationError("B must be n x m for A m x n");
    const int j = static_cast<int>(t_set.size());
    if (static_cast<int>(u_set.size()) != n - j) throw ValidationError("|U| must equal n - |T|");
    if (j > m) throw ValidationError("|T| must not exceed m");
    std::vector<char> used(n, 0);
    for (int x : t_set) {
        if (x < 0 || x >= n || used[x]) throw ValidationError("T, U must be disjoint subsets of [n]");
        used[x] = 1;
    }
    for (int x : u_set) {
        if (x < 0 || x >= n || used[x]) throw ValidationError("T, U must be disjoint subsets of [n]");
        used[x] = 1;
    }

    CauchyBinetSides out;
    const int pick = m - j;
    if (pick <= static_cast<int>(u_set.size())) {
        for (const auto& s : subsets_lex(static_cast<int>(u_set.size()), pick)) {
            Subset cols;
            for (int x : s) cols.push_back(u_set[x]);
            cols.insert(cols.end(), t_set.begin(), t_set.end());
            std::sort(cols.begin(), cols.end());
            out.lhs += determinant(select_columns(a, cols)) * determinant(select_rows(b, cols));
        }
    }

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(j + m, j + m);
    block.topRightCorner(j, m) = select_rows(b, t_set);
    block.bottomLeftCorner(m, j) = select_columns(a, t_set);
    block.bottomRightCorner(m, m) = select_columns(a, u_set) * select_rows(b, u_set);
    out.rhs = (j % 2 == 0 ? 1.0 : -1.0) * determinant(block);
    return out;
}

// ---------------------------------------------------------------------------
// Tensor train
// ---------------------------------------------------------------------------

int TTDecomposition::max_rank() const {
    return ranks.empty() ? 1 : *std::max_element(ranks.begin(), ranks.end());
}

double TTDecomposition::discarded_norm() const {
    return std::sqrt(std::accumulate(discarded.begin(), discarded.end(), 0.0));
}

TTDecomposition tt_decompose(const OccupationTensor& t, double eps) {
    if (!(eps >= 0.0)) throw ValidationError("truncation threshold must be non-negative");
    const int l = t.num_sites();
    TTDecomposition tt;
    tt.truncation_threshold = eps;
    if (l == 1) {
        TTCore core;
        core.slice[0] = Eigen::MatrixXd::Constant(1, 1, t[0]);
        core.slice[1] = Eigen::MatrixXd::Constant(1, 1, t[1]);
        tt.cores.push_back(std::move(core));
        return tt;
    }

    // remainder: rows = (alpha_{k-1}, mu_k), columns = (mu_{k+1}, ..., mu_L)
    Eigen::MatrixXd rem(2, Index{1} << (l - 1));
    for (Index x = 0; x < t.size(); ++x) rem(x >> (l - 1), x & ((Index{1} << (l - 1)) - 1)) = t[x];

    for (int k = 1; k < l; ++k) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rem, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double cutoff = std::max(eps, kRankThreshold) * sv(0);
        int r = 0;
        double dropped = 0.0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > cutoff) {
                ++r;
            } else {
                dropped += sv(i) * sv(i);
            }
        }
        r = std::max(r, 1);
        const auto r_prev = rem.rows() / 2;

        TTCore core;
        for (int mu = 0; mu < 2; ++mu) {
            core.slice[mu].resize(r_prev, r);
            for (Eigen::Index a = 0; a < r_prev; ++a) {
                core.slice[mu].row(a) = svd.matrixU().row(2 * a + mu).head(r);
            }
        }
        tt.cores.push_back(std::move(core));
        tt.ranks.push_back(r);
        tt.discarded.push_back(dropped);

        const Eigen::MatrixXd carry =
            sv.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
        const Eigen::Index half = carry.cols() / 2;
        Eigen::MatrixXd next(2 * r, half);
        for (Eigen::Index b = 0; b < r; ++b) {
            next.row(2 * b) = carry.row(b).head(half);
            next.row(2 * b + 1) = carry.row(b).tail(half);
        }
        rem = std::move(next);
    }

    TTCore last;
    for (int mu = 0; mu < 2; ++mu) {
        last.slice[mu].resize(rem.rows() / 2, 1);
        for (Eigen::Index b = 0; b < rem.rows() / 2; ++b) last.slice[mu](b, 0) = rem(2 * b + mu, 0);
    }
    tt.cores.push_back(std::move(last));
    return tt;
}

std::vector<double> tt_contract(const TTDecomposition& tt) {
    // partial(x, alpha): contraction of the first k cores, x = (mu_1..mu_k)
    Eigen::MatrixXd partial = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& core : tt.cores) {
        const Eigen::MatrixXd p0 = partial * core.slice[0];
        const Eigen::MatrixXd p1 = partial * core.slice[1];
        Eigen::MatrixXd next(2 * partial.rows(), core.right_rank());
        for (Eigen::Index x = 0; x < partial.rows(); ++x) {
            next.row(2 * x) = p0.row(x);
            next.row(2 * x + 1) = p1.row(x);
        }
        partial = std::move(next);
    }
    return std::vector<double>(partial.data(), partial.data() + partial.size());
}

// ---------------------------------------------------------------------------
// Superposition bound
// ---------------------------------------------------------------------------

double weyl_bound_check(std::span<const CutSpectrum> components,
                        std::span<const double> amplitudes,
                        const CutSpectrum& total,
                        std::span<const WeylAssignment> assignments) {
    if (components.size() != amplitudes.size()) {
        throw ValidationError("one amplitude per component spectrum required");
    }
    auto value_at = [](const CutSpectrum& s, int one_based) {
        const auto i = static_cast<std::size_t>(one_based - 1);
        return i < s.values.size() ? s.values[i] : 0.0;
    };
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& a : assignments) {
        if (a.parts.size() != components.size()) {
            throw ValidationError("assignment needs one index per component");
        }
        if (a.j < 1 || a.j > static_cast<int>(total.values.size())) {
            throw ValidationError("assignment index j out of range");
        }
        int sum = 0;
        for (int p : a.parts) {
            if (p < 0) throw ValidationError("assignment indices must be non-negative");
            sum += p;
        }
        if (sum != a.j) throw ValidationError("assignment indices must sum to j");
        double bound = 0.0;
        for (std::size_t c = 0; c < components.size(); ++c) {
            bound += std::abs(amplitudes[c]) * value_at(components[c], std::max(a.parts[c], 1));
        }
        worst = std::max(worst, value_at(total, a.j) - bound);
    }
    return assignments.empty() ? 0.0 : worst;
}

std::vector<WeylAssignment> random_compositions(int j, int terms, int count, std::mt19937_64& rng) {
    if (terms < 1 || j < 1) throw ValidationError("composition needs j >= 1 and terms >= 1");
    std::vector<WeylAssignment> out;
    out.reserve(count);
    // stars and bars: choose terms-1 bar positions among j+terms-1 slots
    std::vector<char> slots(j + terms - 1, 0);
    std::fill(slots.begin(), slots.begin() + (terms - 1), 1);
    for (int c = 0; c < count; ++c) {
        std::shuffle(slots.begin(), slots.end(), rng);
        WeylAssignment a;
        a.j = j;
        int run = 0;
        for (char s : slots) {
            if (s) {
                a.parts.push_back(run);
                run = 0;
            } else {
                ++run;
            }
        }
        a.parts.push_back(run);
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace slatertt
