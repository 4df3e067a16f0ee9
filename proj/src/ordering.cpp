// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "slatertt/errors.hpp"
#include "slatertt/spectra.hpp"

namespace slatertt {

std::string_view to_string(OrderingMethod m) {
    switch (m) {
    case OrderingMethod::canonical: return "canonical";
    case OrderingMethod::fiedler: return "fiedler";
    case OrderingMethod::prefactor_exact: return "prefactor_exact";
    case OrderingMethod::prefactor_anneal: return "prefactor_anneal";
    case OrderingMethod::weighted_prefactor: return "weighted_prefactor";
    case OrderingMethod::weighted_prefactor_anneal: return "weighted_prefactor_anneal";
    }
    return "unknown";
}

OrderingMethod ordering_method_from_string(std::string_view s) {
    for (auto m : {OrderingMethod::canonical, OrderingMethod::fiedler,
                   OrderingMethod::prefactor_exact, OrderingMethod::prefactor_anneal,
                   OrderingMethod::weighted_prefactor,
                   OrderingMethod::weighted_prefactor_anneal}) {
        if (to_string(m) == s) return m;
    }
    throw ValidationError("unknown ordering method '" + std::string(s) + "'");
}

void AnnealConfig::validate() const {
    if (!(initial_temperature > 0.0)) throw ValidationError("initial temperature must be > 0");
    if (!(decay > 0.0 && decay < 1.0)) throw ValidationError("decay rate must lie in (0, 1)");
}

Ordering bipartition_ordering(std::span<const int> left, int num_sites) {
    Subset sorted(left.begin(), left.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> perm(sorted);
    const auto rest = complement(sorted, num_sites);
    perm.insert(perm.end(), rest.begin(), rest.end());
    return Ordering::from_permutation(std::move(perm));
}

OrderingResult canonical_order(int num_sites) {
    if (num_sites < 1) throw ValidationError("need at least one site");
    return OrderingResult{Ordering::identity(num_sites), OrderingMethod::canonical, {}, {}, {}, {}};
}

// ---------------------------------------------------------------------------
// Fiedler
// ---------------------------------------------------------------------------

OrderingResult fiedler_order(const MutualInfoGraph& im) {
    const auto& w = im.values;
    const int l = im.num_sites();
    if (w.rows() != w.cols() || l < 1) throw ValidationError("IM must be a square matrix");
    if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw ValidationError("IM must be symmetric");

    OrderingResult out = canonical_order(l);
    out.method = OrderingMethod::fiedler;
    if (l == 1) return out;
    if (w.cwiseAbs().maxCoeff() <= 1e-14) {
        out.warnings.push_back("degenerate Fiedler vector: mutual information vanishes, identity order kept");
        return out;
    }

    Eigen::MatrixXd lap = -w;
    lap.diagonal().setZero();
    lap.diagonal() = -lap.rowwise().sum();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    const auto& evals = es.eigenvalues();
    const double tol = 1e-10 * std::max(1.0, std::abs(evals(l - 1)));
    int kernel = 0;
    while (kernel < l && evals(kernel) <= tol) ++kernel;

    Eigen::VectorXd f = es.eigenvectors().col(1);
    if (kernel > 1) {
        out.warnings.push_back("degenerate Fiedler vector: Laplacian kernel has dimension "
                               + std::to_string(kernel));
        // first kernel vector (solver order) with a non-constant component
        for (int c = 0; c < kernel; ++c) {
            Eigen::VectorXd v = es.eigenvectors().col(c);
            v.array() -= v.mean();
            if (v.norm() > 1e-8) {
                f = v.normalized();
                break;
            }
        }
    }

    const double peak = f.cwiseAbs().maxCoeff();
    for (int i = 0; i < l; ++i) {
        if (std::abs(f(i)) >= peak * (1.0 - 1e-9)) {
            if (f(i) < 0) f = -f;
            break;
        }
    }
    std::vector<int> perm(l);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return f(a) < f(b); });
    out.ordering = Ordering::from_permutation(std::move(perm));
    return out;
}

// ---------------------------------------------------------------------------
// Subset search
// ---------------------------------------------------------------------------

namespace {

using Objective = std::function<double(std::span<const int>)>;

struct SubsetOptimum {
    Subset subset;
    double value = 0.0;
};

int resolve_size(int requested, int fallback, int num_sites) {
    const int size = requested == 0 ? fallback : requested;
    if (size < 1 || size > num_sites - 1) {
        throw ValidationError("bipartition size must lie in [1, L-1]");
    }
    return size;
}

SubsetOptimum exhaustive_search(int l, int size, std::uint64_t cap, const Objective& f) {
    const auto count = binomial(l, size);
    if (count > cap) {
        throw CapacityError("exhaustive search over " + std::to_string(count)
                            + " subsets exceeds the cap of " + std::to_string(cap)
                            + "; use the annealing variant");
    }
    Subset s(size);
    std::iota(s.begin(), s.end(), 0);
    SubsetOptimum best{s, f(s)};
    while (next_subset(s, l)) {
        const double v = f(s);
        if (v < best.value) best = {s, v};
    }
    return best;
}

SubsetOptimum anneal_search(int l, Subset active, const AnnealConfig& cfg, const Objective& f) {
    std::sort(active.begin(), active.end());
    const int size = static_cast<int>(active.size());
    const std::uint64_t iterations =
        cfg.max_iterations != 0 ? cfg.max_iterations : (binomial(l, size) + 1) / 2;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> pick_active(0, size - 1);
    std::uniform_int_distribution<int> pick_virtual(0, l - size - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Subset virt = complement(active, l);
    double current = f(active);
    SubsetOptimum best{active, current};
    double tau = cfg.initial_temperature;
    Subset trial;
    for (std::uint64_t it = 0; it < iterations; ++it) {
        tau *= cfg.decay;
        const int a = pick_active(rng);
        const int b = pick_virtual(rng);
        trial = active;
        trial[a] = virt[b];
        std::sort(trial.begin(), trial.end());
        const double candidate = f(trial);
        const double u = unit(rng);
        const bool accept = candidate < current || std::exp(-(candidate - current) / tau) > u;
        if (!accept) continue;
        active = trial;
        virt = complement(active, l);
        current = candidate;
        if (current < best.value) best = {active, current};
    }
    return best;
}

Subset initial_subset(const AnnealConfig& cfg, int l, int size,
                      const std::function<MutualInfoGraph()>& im) {
    switch (cfg.warm_start) {
    case WarmStart::canonical: {
        Subset s(size);
        std::iota(s.begin(), s.end(), 0);
        return s;
    }
    case WarmStart::random: {
        std::vector<int> all(l);
        std::iota(all.begin(), all.end(), 0);
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        std::shuffle(all.begin(), all.end(), rng);
        Subset s(all.begin(), all.begin() + size);
        std::sort(s.begin(), s.end());
        return s;
    }
    case WarmStart::fiedler: break;
    }
    const auto perm = fiedler_order(im()).ordering.permutation();
    Subset s(perm.begin(), perm.begin() + size);
    std::sort(s.begin(), s.end());
    return s;
}

void check_initial(const Subset& s, int l, int size) {
    if (static_cast<int>(s.size()) != size) throw ValidationError("initial subset has wrong size");
    Subset sorted(s);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()
        || sorted.front() < 0 || sorted.back() >= l) {
        throw ValidationError("initial subset must hold distinct labels in [0, L)");
    }
}

OrderingResult subset_result(const SubsetOptimum& opt, int l, OrderingMethod method) {
    OrderingResult r{bipartition_ordering(opt.subset, l), method, opt.value, opt.subset, {}, {}};
    return r;
}

}  // namespace

OrderingResult best_prefactor_exhaustive(const PartialIsometry& u, int subset_size,
                                         std::uint64_t cap) {
    const int l = u.num_sites();
    const int size = resolve_size(subset_size, u.num_particles(), l);
    const auto& m = u.matrix();
    const auto opt = exhaustive_search(l, size, cap, [&](std::span<const int> s) {
        return bipartition_prefactor(m, s);
    });
    return subset_result(opt, l, OrderingMethod::prefactor_exact);
}

OrderingResult anneal_prefactor(const PartialIsometry& u, const AnnealConfig& cfg,
                                std::optional<Subset> initial, int subset_size) {
    cfg.validate();
    const int l = u.num_sites();
    const int size = resolve_size(subset_size, u.num_particles(), l);
    Subset start = initial ? *initial
                           : initial_subset(cfg, l, size, [&] { return mutual_information(u); });
    check_initial(start, l, size);
    const auto& m = u.matrix();
    const auto opt = anneal_search(l, std::move(start), cfg, [&](std::span<const int> s) {
        return bipartition_prefactor(m, s);
    });
    auto r = subset_result(opt, l, OrderingMethod::prefactor_anneal);
    r.seed = cfg.seed;
    return r;
}

double weighted_prefactor(const CorrelatedState& state, std::span<const int> left) {
    double total = 0.0;
    for (std::size_t t = 0; t < state.terms().size(); ++t) {
        const auto rows = select_rows(state.orbitals().matrix(), state.terms()[t].orbitals);
        total += std::abs(state.terms()[t].amplitude) * bipartition_prefactor(rows, left);
    }
    return total;
}

namespace {

Objective weighted_objective(const CorrelatedState& state) {
    std::vector<std::pair<double, Eigen::MatrixXd>> terms;
    for (const auto& t : state.terms()) {
        terms.emplace_back(std::abs(t.amplitude), select_rows(state.orbitals().matrix(), t.orbitals));
    }
    return [terms = std::move(terms)](std::span<const int> s) {
        double total = 0.0;
        for (const auto& [w, rows] : terms) total += w * bipartition_prefactor(rows, s);
        return total;
    };
}

}  // namespace

OrderingResult best_weighted_prefactor(const CorrelatedState& state, int k, std::uint64_t cap) {
    const int l = state.num_sites();
    const int size = resolve_size(k, l / 2, l);
    const auto opt = exhaustive_search(l, size, cap, weighted_objective(state));
    return subset_result(opt, l, OrderingMethod::weighted_prefactor);
}

OrderingResult anneal_weighted_prefactor(const CorrelatedState& state, const AnnealConfig& cfg,
                                         int k, std::optional<Subset> initial) {
    cfg.validate();
    const int l = state.num_sites();
    const int size = resolve_size(k, l / 2, l);
    Subset start = initial ? *initial : initial_subset(cfg, l, size, [&] {
        return mutual_information(correlated_tensor(state));
    });
    check_initial(start, l, size);
    const auto opt = anneal_search(l, std::move(start), cfg, weighted_objective(state));
    auto r = subset_result(opt, l, OrderingMethod::weighted_prefactor_anneal);
    r.seed = cfg.seed;
    return r;
}

}  // namespace slatertt
