// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slatertt/errors.hpp"

namespace slatertt {

namespace {

void check_site(int site, int num_sites) {
    if (site < 0 || site >= num_sites) {
        throw ValidationError("site " + std::to_string(site) + " out of range");
    }
}

void check_pair(int i, int j, int num_sites) {
    check_site(i, num_sites);
    check_site(j, num_sites);
    if (i >= j) throw ValidationError("two-orbital matrices need i < j");
}

}  // namespace

OrbitalRDM1 rdm1_brute(const OccupationTensor& t, int i) {
    const int l = t.num_sites();
    check_site(i, l);
    const Index bit = site_bit(i, l);
    OrbitalRDM1 out{i, Eigen::Matrix2d::Zero()};
    for (Index x = 0; x < t.size(); ++x) {
        if (x & bit) continue;
        const double a0 = t[x];
        const double a1 = t[x | bit];
        out.rho(0, 0) += a0 * a0;
        out.rho(0, 1) += a0 * a1;
        out.rho(1, 1) += a1 * a1;
    }
    out.rho(1, 0) = out.rho(0, 1);
    return out;
}

OrbitalRDM2 rdm2_brute(const OccupationTensor& t, int i, int j) {
    const int l = t.num_sites();
    check_pair(i, j, l);
    const Index bi = site_bit(i, l);
    const Index bj = site_bit(j, l);
    OrbitalRDM2 out{i, j, Eigen::Matrix4d::Zero()};
    Eigen::Vector4d a;
    for (Index x = 0; x < t.size(); ++x) {
        if (x & (bi | bj)) continue;
        a << t[x], t[x | bj], t[x | bi], t[x | bi | bj];
        if (a.isZero(0.0)) continue;
        out.rho.noalias() += a * a.transpose();
    }
    return out;
}

OrbitalRDM1 rdm1_slater(const PartialIsometry& u, int i) {
    check_site(i, u.num_sites());
    const double w = u.column(i).squaredNorm();
    OrbitalRDM1 out{i, Eigen::Matrix2d::Zero()};
    out.rho(0, 0) = 1.0 - w;
    out.rho(1, 1) = w;
    return out;
}

double slater_coupling(const PartialIsometry& u, int i, int j, CouplingPath path) {
    check_pair(i, j, u.num_sites());
    const int n = u.num_particles();
    const auto& m = u.matrix();
    const Eigen::VectorXd ui = m.col(i);
    const Eigen::VectorXd uj = m.col(j);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

    // Id - 2 (|u_k|^2 Id - u_k u_k^T), the factor each intermediate site contributes
    auto twist = [&](int k) {
        const Eigen::VectorXd uk = m.col(k);
        return Eigen::MatrixXd(id - 2.0 * (uk.squaredNorm() * id - uk * uk.transpose()));
    };

    if (path == CouplingPath::automatic) {
        if (j == i + 1) {
            path = CouplingPath::adjacent;
        } else if (j == i + 2) {
            path = CouplingPath::next_nearest;
        } else if (n == 2) {
            path = CouplingPath::two_particle;
        } else {
            path = CouplingPath::general;
        }
    }

    switch (path) {
    case CouplingPath::adjacent:
        if (j != i + 1) throw ValidationError("adjacent path needs j = i + 1");
        return ui.dot(uj);
    case CouplingPath::next_nearest:
        if (j != i + 2) throw ValidationError("next-nearest path needs j = i + 2");
        return uj.dot(twist(i + 1) * ui);
    case CouplingPath::two_particle: {
        if (n != 2) throw ValidationError("two-particle path needs N = 2");
        Eigen::MatrixXd acc = id;
        for (int k = i + 1; k < j; ++k) acc -= 2.0 * (m.col(k).squaredNorm() * id
                                                      - m.col(k) * m.col(k).transpose());
        return uj.dot(acc * ui);
    }
    case CouplingPath::general:
    case CouplingPath::automatic:
        break;
    }

    // sum over gamma subset of the sites strictly between i and j. Terms with
    // |gamma| >= N vanish: the top k+1 rows of the block matrix have rank <= N.
    const int gap = j - i - 1;
    double total = 0.0;
    for (int k = 0; k <= std::min(gap, n - 1); ++k) {
        for (const auto& local : subsets_lex(gap, k)) {
            Subset gamma(local);
            for (int& g : gamma) g += i + 1;
            Subset gamma_c;
            for (int s = i + 1; s < j; ++s) {
                if (!std::binary_search(gamma.begin(), gamma.end(), s)) gamma_c.push_back(s);
            }
            Subset top_cols = gamma;
            top_cols.push_back(j);
            Subset left_cols{i};
            left_cols.insert(left_cols.end(), gamma.begin(), gamma.end());

            const int h = k + 1;
            Eigen::MatrixXd block = Eigen::MatrixXd::Zero(h + n, h + n);
            block.topRightCorner(h, n) = select_columns(m, top_cols).transpose();
            block.bottomLeftCorner(n, h) = select_columns(m, left_cols);
            const Eigen::MatrixXd uc = select_columns(m, gamma_c);
            block.bottomRightCorner(n, n) = id - uc * uc.transpose();
            total += ((k + 1) % 2 == 0 ? 1.0 : -1.0) * determinant(block);
        }
    }
    return total;
}

OrbitalRDM2 rdm2_slater(const PartialIsometry& u, int i, int j, CouplingPath path) {
    check_pair(i, j, u.num_sites());
    const auto ui = u.column(i);
    const auto uj = u.column(j);
    const double ni = ui.squaredNorm();
    const double nj = uj.squaredNorm();
    const double overlap = ui.dot(uj);
    const double g = ni * nj - overlap * overlap;
    const double c = slater_coupling(u, i, j, path);

    OrbitalRDM2 out{i, j, Eigen::Matrix4d::Zero()};
    out.rho(0, 0) = 1.0 - ni - nj + g;
    out.rho(1, 1) = nj - g;  // site i empty, site j occupied
    out.rho(2, 2) = ni - g;
    out.rho(3, 3) = g;
    out.rho(1, 2) = c;
    out.rho(2, 1) = c;
    return out;
}

double von_neumann_entropy(const Eigen::Ref<const Eigen::MatrixXd>& rho) {
    if (rho.rows() != rho.cols()) throw ValidationError("density matrix must be square");
    if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw ValidationError("density matrix is not symmetric");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-8) {
        throw ValidationError("density matrix trace " + std::to_string(rho.trace()) + " != 1");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = std::clamp(es.eigenvalues()(k), 0.0, 1.0);
        if (lam > 0.0) s -= lam * std::log2(lam);
    }
    return s;
}

namespace {

template <typename One, typename Two>
MutualInfoGraph assemble_mutual_information(int l, One one, Two two) {
    std::vector<double> s1(l);
    for (int i = 0; i < l; ++i) s1[i] = von_neumann_entropy(one(i));
    MutualInfoGraph g{Eigen::MatrixXd::Zero(l, l)};
    for (int i = 0; i < l; ++i) {
        for (int j = i + 1; j < l; ++j) {
            double v = s1[i] + s1[j] - von_neumann_entropy(two(i, j));
            if (v < -1e-10) {
                throw ConsistencyError("negative mutual information " + std::to_string(v)
                                       + " at (" + std::to_string(i) + ", "
                                       + std::to_string(j) + ")");
            }
            v = std::max(v, 0.0);
            g.values(i, j) = v;
            g.values(j, i) = v;
        }
    }
    return g;
}

}  // namespace

MutualInfoGraph mutual_information(const OccupationTensor& t) {
    return assemble_mutual_information(
        t.num_sites(),
        [&](int i) { return Eigen::MatrixXd(rdm1_brute(t, i).rho); },
        [&](int i, int j) { return Eigen::MatrixXd(rdm2_brute(t, i, j).rho); });
}

MutualInfoGraph mutual_information(const PartialIsometry& u) {
    return assemble_mutual_information(
        u.num_sites(),
        [&](int i) { return Eigen::MatrixXd(rdm1_slater(u, i).rho); },
        [&](int i, int j) { return Eigen::MatrixXd(rdm2_slater(u, i, j).rho); });
}

}  // namespace slatertt
