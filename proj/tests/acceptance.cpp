// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one "[PASS] n ..." or "[FAIL] n ..." line per criterion
// and exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "slatertt/errors.hpp"
#include "slatertt/experiments.hpp"
#include "slatertt/ordering.hpp"
#include "slatertt/rdm.hpp"
#include "slatertt/spectra.hpp"
#include "slatertt/tensor_core.hpp"

using namespace slatertt;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Fixed ensemble of random Slater states shared by criteria 1 and 2.
struct RandomSlater {
    PartialIsometry u;
    OccupationTensor t;
};

std::vector<RandomSlater> slater_ensemble(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<RandomSlater> out;
    for (int i = 0; i < count; ++i) {
        const int n = std::uniform_int_distribution<int>(2, 8)(rng);
        const int l = std::uniform_int_distribution<int>(2 * n, 16)(rng);
        auto u = random_partial_isometry(n, l, rng());
        auto t = slater_coefficients(u);
        out.push_back({std::move(u), std::move(t)});
    }
    return out;
}

Outcome inversion_symmetry() {
    const auto t0 = Clock::now();
    const auto states = slater_ensemble(100, 101);
    double worst = 0.0;
    int cuts = 0;
    for (const auto& s : states) {
        const int l = s.u.num_sites();
        for (int k = 1; k < l; ++k) {
            auto sp = cut_spectrum_sectors(s.t, k);
            sp.prefactor = prefactor(s.u, k);
            worst = std::max(worst, check_inversion_symmetry(sp));
            ++cuts;
        }
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-9 && secs < 60.0,
            std::to_string(cuts) + " cuts, max relative residual " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome rank_law() {
    const auto states = slater_ensemble(100, 101);
    int mismatches = 0, cuts = 0;
    for (const auto& s : states) {
        const int l = s.u.num_sites(), n = s.u.num_particles();
        for (int k = 1; k < l; ++k) {
            const auto sp = cut_spectrum_sectors(s.t, k);
            const auto above = std::count_if(sp.values.begin(), sp.values.end(), [](double v) { return v > 1e-10; });
            const long expected = 1L << std::min({k, n, l - k});
            if (above != expected) ++mismatches;
            ++cuts;
        }
    }
    int construction_failures = 0;
    for (int n = 1; n <= 4; ++n) {
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, 2 * n);
        for (int r = 0; r < n; ++r) u(r, r) = u(r, r + n) = 1.0 / std::sqrt(2.0);
        const auto sp = cut_spectrum_dense(slater_coefficients(PartialIsometry::from_matrix(u)), n);
        const auto above = std::count_if(sp.values.begin(), sp.values.end(), [](double v) { return v > 1e-10; });
        if (above != (1L << n)) ++construction_failures;
    }
    return {mismatches == 0 && construction_failures == 0,
            std::to_string(mismatches) + "/" + std::to_string(cuts) + " cut mismatches, "
                + std::to_string(construction_failures) + "/4 construction mismatches"};
}

Outcome block_formula() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    int instances = 0, degenerate = 0;
    while (instances < 200) {
        const int n = std::uniform_int_distribution<int>(1, 5)(rng);
        const int l = std::uniform_int_distribution<int>(n + 1, 12)(rng);
        const int k = std::uniform_int_distribution<int>(1, l - 1)(rng);
        if (!(k <= l - n || k >= n)) continue;
        const auto u = random_partial_isometry(n, l, rng());
        const auto dense = cut_spectrum_dense(slater_coefficients(u), k);
        try {
            const auto block = slater_cut_spectrum_block(u, k);
            for (std::size_t i = 0; i < dense.values.size(); ++i) {
                worst = std::max(worst, std::abs(dense.values[i] - block.values[i]));
            }
        } catch (const DegeneracyError&) {
            ++degenerate;
        }
        ++instances;
    }
    return {worst < 1e-9 && degenerate == 0,
            "200 instances, max multiset distance " + fmt(worst) + ", " + std::to_string(degenerate)
                + " degenerate"};
}

Outcome cauchy_binet() {
    std::mt19937_64 rng(404);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    int instances = 0, classical = 0;
    while (instances < 1000) {
        int m = std::uniform_int_distribution<int>(1, 6)(rng);
        int n = std::uniform_int_distribution<int>(1, 6)(rng);
        if (m > n) std::swap(m, n);
        Eigen::MatrixXd a(m, n), b(n, m);
        for (int i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
        for (int i = 0; i < b.size(); ++i) b.data()[i] = nd(rng);
        for (int j = 0; j <= m && instances < 1000; ++j) {
            std::vector<int> labels(n);
            std::iota(labels.begin(), labels.end(), 0);
            std::shuffle(labels.begin(), labels.end(), rng);
            Subset t(labels.begin(), labels.begin() + j), rest(labels.begin() + j, labels.end());
            std::sort(t.begin(), t.end());
            std::sort(rest.begin(), rest.end());
            const auto sides = modified_cauchy_binet(a, b, t, rest);
            worst = std::max(worst, std::abs(sides.lhs - sides.rhs) / std::max(1.0, std::abs(sides.lhs)));
            if (j == 0) {
                // the j = 0 case is det(AB)
                const double direct = oracle::leibniz_det(a * b);
                worst = std::max(worst, std::abs(sides.lhs - direct) / std::max(1.0, std::abs(direct)));
                ++classical;
            }
            ++instances;
        }
    }
    return {worst < 1e-10, "1000 instances (" + std::to_string(classical) + " with j = 0), max error " + fmt(worst)};
}

Outcome rdm_closed_forms() {
    std::mt19937_64 rng(505);
    double worst = 0.0, worst_path = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const int l = std::uniform_int_distribution<int>(3, 10)(rng);
        const int n = std::uniform_int_distribution<int>(1, l - 1)(rng);
        const auto u = random_partial_isometry(n, l, rng());
        int i = std::uniform_int_distribution<int>(0, l - 1)(rng);
        int j = std::uniform_int_distribution<int>(0, l - 2)(rng);
        if (j >= i) ++j;
        if (i > j) std::swap(i, j);
        const auto c = oracle::slater_tensor(u.matrix());
        worst = std::max(worst, (rdm2_slater(u, i, j).rho - oracle::rdm2(c, l, i, j)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (rdm1_slater(u, i).rho - oracle::rdm1(c, l, i)).cwiseAbs().maxCoeff());
        const double general = slater_coupling(u, i, j, CouplingPath::general);
        if (j == i + 1) {
            worst_path = std::max(worst_path, std::abs(slater_coupling(u, i, j, CouplingPath::adjacent) - general));
        }
        if (j == i + 2) {
            worst_path =
                std::max(worst_path, std::abs(slater_coupling(u, i, j, CouplingPath::next_nearest) - general));
        }
        if (n == 2) {
            worst_path =
                std::max(worst_path, std::abs(slater_coupling(u, i, j, CouplingPath::two_particle) - general));
        }
        // every fast path is also exercised on every instance where it applies
        for (int a = 0; a + 1 < l; ++a) {
            const double g = slater_coupling(u, a, a + 1, CouplingPath::general);
            worst_path = std::max(worst_path, std::abs(slater_coupling(u, a, a + 1, CouplingPath::adjacent) - g));
            if (a + 2 < l) {
                const double g2 = slater_coupling(u, a, a + 2, CouplingPath::general);
                worst_path =
                    std::max(worst_path, std::abs(slater_coupling(u, a, a + 2, CouplingPath::next_nearest) - g2));
            }
        }
    }
    return {worst < 1e-10 && worst_path < 1e-12,
            "200 instances, max entry error " + fmt(worst) + ", max path disagreement " + fmt(worst_path)};
}

Outcome h2_example() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> ang(0.05, 1.5);
    double worst = 0.0;
    int failures = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const double a = ang(rng), b = ang(rng);
        const double c = std::cos(a), s = std::sin(a), cp = std::cos(b), sp = std::sin(b);
        const auto u = PartialIsometry::from_matrix(testing::h2_orbitals(c, s, cp, sp));
        const auto t = slater_coefficients(u);

        // anti-diagonal table: rows (A up, A down), columns (B up, B down)
        Eigen::Matrix4d table = Eigen::Matrix4d::Zero();
        table(0, 3) = s * sp;
        table(1, 2) = -s * cp;
        table(2, 1) = c * sp;
        table(3, 0) = c * cp;
        const Eigen::Vector4d expected = Eigen::JacobiSVD<Eigen::Matrix4d>(table).singularValues();
        const auto canonical = cut_spectrum_dense(t, 2);
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(canonical.values[i] - expected[i]));
        const double p_canonical = prefactor(u, 2);
        const double ccss = c * cp * s * sp;
        worst = std::max(worst, std::abs(p_canonical - ccss * ccss));

        const auto fiedler = fiedler_order(mutual_information(u)).ordering;
        const auto best = best_prefactor_exhaustive(u).ordering;
        for (const auto& ord : {fiedler, best}) {
            const auto sp_ord = cut_spectrum_dense(apply_ordering(t, ord), 2);
            worst = std::max(worst, std::abs(sp_ord.values[0] - 1.0));
            for (int i = 1; i < 4; ++i) worst = std::max(worst, std::abs(sp_ord.values[i]));
            worst = std::max(worst, std::abs(prefactor(permute_columns(u, ord), 2)));
        }
        if (worst > 1e-14) ++failures;
    }
    return {failures == 0, "20 draws, max deviation " + fmt(worst)};
}

Outcome weyl_bound() {
    std::mt19937_64 rng(707);
    double worst = -INFINITY;
    int violations = 0, checks = 0;
    struct Setup {
        StateFamily family;
        int n, l, states;
        bool all_cuts;
    };
    const std::vector<Setup> setups{{StateFamily::weak_correlated, 8, 16, 10, false},
                                    {StateFamily::strong_correlated, 8, 16, 10, false},
                                    {StateFamily::weak_correlated, 4, 10, 10, true},
                                    {StateFamily::strong_correlated, 4, 10, 10, true}};
    for (const auto& su : setups) {
        for (int rep = 0; rep < su.states; ++rep) {
            const auto state = build_state(su.family, su.n, su.l, rng());
            const auto total_t = correlated_tensor(state);
            std::vector<OccupationTensor> parts;
            std::vector<double> amps;
            for (std::size_t t = 0; t < state.terms().size(); ++t) {
                parts.push_back(slater_coefficients(state.term_isometry(t)));
                amps.push_back(state.terms()[t].amplitude);
            }
            std::vector<int> cuts;
            if (su.all_cuts) {
                for (int k = 1; k < su.l; ++k) cuts.push_back(k);
            } else {
                cuts.push_back(su.l / 2);
            }
            for (int k : cuts) {
                const auto total = cut_spectrum_sectors(total_t, k);
                std::vector<CutSpectrum> comps;
                for (const auto& p : parts) comps.push_back(cut_spectrum_sectors(p, k));
                for (int j = 1; j <= static_cast<int>(total.values.size()); ++j) {
                    const auto assignments =
                        random_compositions(j, static_cast<int>(comps.size()), 100, rng);
                    const double w = weyl_bound_check(comps, amps, total, assignments);
                    worst = std::max(worst, w);
                    if (w > 1e-10) ++violations;
                    checks += 100;
                }
            }
        }
    }
    return {violations == 0,
            std::to_string(checks) + " assignments, " + std::to_string(violations)
                + " violating indices, max excess " + fmt(worst)};
}

double tail_mean(const MethodStats& s) {
    // indices 150..256, 1-based
    double sum = 0.0;
    for (int i = 149; i < 256; ++i) sum += s.mean_log10[i];
    return sum / 107.0;
}

const MethodStats& stats_for(const EnsembleResult& r, ExperimentMethod m) {
    for (const auto& s : r.stats) {
        if (s.method == m) return s;
    }
    throw ValidationError("method missing from ensemble");
}

EnsembleResult figure_run(int figure) {
    auto cfg = figure_preset(figure);
    cfg.trials = 100;
    cfg.master_seed = 2020;
    return run_ensemble(cfg);
}

Outcome figure2() {
    const auto t0 = Clock::now();
    const auto r = figure_run(2);
    const double secs = seconds_since(t0);
    const double canon = tail_mean(stats_for(r, ExperimentMethod::canonical));
    const double fied = tail_mean(stats_for(r, ExperimentMethod::fiedler));
    const double best = tail_mean(stats_for(r, ExperimentMethod::prefactor_exact));
    const double anneal = tail_mean(stats_for(r, ExperimentMethod::prefactor_anneal));
    return {canon - best >= 3.0 && canon - fied >= 0.5 && secs < 600.0,
            "tail mean log10: canonical " + fmt(canon) + ", fiedler " + fmt(fied) + ", prefactor " + fmt(best)
                + ", anneal " + fmt(anneal) + "; gaps " + fmt(canon - best) + " and " + fmt(canon - fied)
                + " decades; " + fmt(secs) + " s"};
}

Outcome figure3() {
    const auto r = figure_run(3);
    const double canon = tail_mean(stats_for(r, ExperimentMethod::canonical));
    const double fied = tail_mean(stats_for(r, ExperimentMethod::fiedler));
    const double dom = tail_mean(stats_for(r, ExperimentMethod::dominant_prefactor));
    const double w = tail_mean(stats_for(r, ExperimentMethod::weighted_prefactor));
    return {canon - w >= 1.5 && w < fied && w < dom,
            "tail mean log10: canonical " + fmt(canon) + ", fiedler " + fmt(fied) + ", dominant " + fmt(dom)
                + ", weighted " + fmt(w) + "; gap " + fmt(canon - w) + " decades"};
}

Outcome figure4() {
    const auto r = figure_run(4);
    const double canon = tail_mean(stats_for(r, ExperimentMethod::canonical));
    const double fied = tail_mean(stats_for(r, ExperimentMethod::fiedler));
    const double dom = tail_mean(stats_for(r, ExperimentMethod::dominant_prefactor));
    const double w = tail_mean(stats_for(r, ExperimentMethod::weighted_prefactor));
    const double spread = std::max({canon, fied, dom}) - std::min({canon, fied, dom});
    return {canon - w >= 0.7 && spread <= 0.5,
            "tail mean log10: canonical " + fmt(canon) + ", fiedler " + fmt(fied) + ", dominant " + fmt(dom)
                + ", weighted " + fmt(w) + "; gap " + fmt(canon - w) + " decades, baseline spread "
                + fmt(spread)};
}

Outcome tensor_train() {
    std::mt19937_64 rng(1111);
    int rank_failures = 0, bound_failures = 0;
    double worst_excess = -INFINITY;
    for (int rep = 0; rep < 50; ++rep) {
        const int l = std::uniform_int_distribution<int>(4, 12)(rng);
        const int n = std::uniform_int_distribution<int>(1, l / 2)(rng);
        const bool slater = rep % 2 == 0 || n < 4 || family_rows(StateFamily::strong_correlated, n) > l;
        const auto state = slater ? build_state(StateFamily::slater, n, l, rng())
                                  : build_state(StateFamily::strong_correlated, n, l, rng());
        const auto t = correlated_tensor(state);
        const auto exact = tt_decompose(t, 0.0);
        for (int k = 1; k < l; ++k) {
            const auto sp = cut_spectrum_dense(t, k);
            if (exact.ranks[k - 1] != sp.rank) ++rank_failures;
            if (slater && exact.ranks[k - 1] > (1 << n)) ++rank_failures;
        }
        for (double eps : {0.0, 1e-3, 1e-2, 1e-1}) {
            const auto tt = tt_decompose(t, eps);
            const auto back = tt_contract(tt);
            double err = 0.0;
            for (std::size_t x = 0; x < back.size(); ++x) err += (back[x] - t[x]) * (back[x] - t[x]);
            err = std::sqrt(err);
            const double excess = err - tt.discarded_norm();
            worst_excess = std::max(worst_excess, excess);
            if (excess > 1e-10) ++bound_failures;
        }
    }
    return {rank_failures == 0 && bound_failures == 0,
            "50 states, " + std::to_string(rank_failures) + " rank mismatches, " + std::to_string(bound_failures)
                + " bound violations, max error minus bound " + fmt(worst_excess)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto base = fs::temp_directory_path() / "slatertt_acceptance";
    fs::remove_all(base);
    auto run = [&](const std::string& name, const std::string& env, const std::string& extra) {
        const auto dir = base / name;
        const std::string cmd = env + " \"" SLATERTT_CLI "\" experiment --figure 2 --trials 10 --seed 42 "
                                + extra + " --out-dir \"" + dir.string() + "\" 2> /dev/null";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) && WEXITSTATUS(status) == 0 ? dir : fs::path{};
    };
    const auto one = run("t1", "SLATERTT_THREADS=1", "");
    const auto four = run("t4", "SLATERTT_THREADS=4", "");
    const auto flag = run("f3", "", "--threads 3");
    if (one.empty() || four.empty() || flag.empty()) return {false, "experiment run failed"};
    int files = 0, differ = 0;
    for (const auto& entry : fs::directory_iterator(one)) {
        if (entry.path().extension() != ".csv") continue;
        ++files;
        const auto a = slurp(entry.path());
        if (a != slurp(four / entry.path().filename()) || a != slurp(flag / entry.path().filename())) ++differ;
    }
    fs::remove_all(base);
    return {files == 4 && differ == 0,
            std::to_string(files) + " CSV files compared across 1, 3 and 4 threads, " + std::to_string(differ)
                + " differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"inversion symmetry", inversion_symmetry},
        {"rank law", rank_law},
        {"block formula vs dense SVD", block_formula},
        {"modified Cauchy-Binet", cauchy_binet},
        {"RDM closed forms", rdm_closed_forms},
        {"H2 example", h2_example},
        {"Weyl bound", weyl_bound},
        {"slater ensemble decade gaps", figure2},
        {"weakly correlated ensemble gaps", figure3},
        {"strongly correlated ensemble gaps", figure4},
        {"tensor train decomposition", tensor_train},
        {"thread-count determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
