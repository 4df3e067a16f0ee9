// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <random>
#include <thread>

#include "slatertt/errors.hpp"
#include "slatertt/rdm.hpp"

namespace slatertt {

std::string_view to_string(StateFamily f) {
    switch (f) {
    case StateFamily::slater: return "slater";
    case StateFamily::weak_correlated: return "weak_correlated";
    case StateFamily::strong_correlated: return "strong_correlated";
    }
    return "unknown";
}

StateFamily state_family_from_string(std::string_view s) {
    if (s == "slater") return StateFamily::slater;
    if (s == "weak_correlated" || s == "weak") return StateFamily::weak_correlated;
    if (s == "strong_correlated" || s == "strong") return StateFamily::strong_correlated;
    throw ValidationError("unknown state family '" + std::string(s) + "'");
}

int family_rows(StateFamily f, int n) {
    switch (f) {
    case StateFamily::slater: return n;
    case StateFamily::weak_correlated: return n + 2;
    case StateFamily::strong_correlated: return 2 * n - 2;
    }
    return n;
}

std::string_view to_string(ExperimentMethod m) {
    switch (m) {
    case ExperimentMethod::canonical: return "canonical";
    case ExperimentMethod::fiedler: return "fiedler";
    case ExperimentMethod::prefactor_exact: return "prefactor_exact";
    case ExperimentMethod::prefactor_anneal: return "prefactor_anneal";
    case ExperimentMethod::dominant_prefactor: return "dominant_prefactor";
    case ExperimentMethod::weighted_prefactor: return "weighted_prefactor";
    case ExperimentMethod::weighted_prefactor_anneal: return "weighted_prefactor_anneal";
    }
    return "unknown";
}

ExperimentMethod experiment_method_from_string(std::string_view s) {
    for (auto m : {ExperimentMethod::canonical, ExperimentMethod::fiedler,
                   ExperimentMethod::prefactor_exact, ExperimentMethod::prefactor_anneal,
                   ExperimentMethod::dominant_prefactor, ExperimentMethod::weighted_prefactor,
                   ExperimentMethod::weighted_prefactor_anneal}) {
        if (to_string(m) == s) return m;
    }
    throw ValidationError("unknown experiment method '" + std::string(s) + "'");
}

std::string_view to_string(SpectrumRoute r) {
    switch (r) {
    case SpectrumRoute::sectors: return "sectors";
    case SpectrumRoute::dense: return "dense";
    case SpectrumRoute::block: return "block";
    }
    return "unknown";
}

SpectrumRoute spectrum_route_from_string(std::string_view s) {
    if (s == "sectors") return SpectrumRoute::sectors;
    if (s == "dense") return SpectrumRoute::dense;
    if (s == "block") return SpectrumRoute::block;
    throw ValidationError("unknown spectrum route '" + std::string(s) + "'");
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t t) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(t + 0x632be59bd9b4e019ULL));
}

PartialIsometry random_partial_isometry(int rows, int num_sites, std::uint64_t seed) {
    if (num_sites < 1 || rows < 1 || rows > num_sites) {
        throw ValidationError("random isometry needs 1 <= rows <= L");
    }
    std::mt19937_64 rng(seed);
    // uniform in (0, 1]; avoids log(0)
    auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
    Eigen::MatrixXd g(num_sites, num_sites);
    bool have_spare = false;
    double spare = 0.0;
    for (int i = 0; i < num_sites; ++i) {
        for (int j = 0; j < num_sites; ++j) {
            if (have_spare) {
                g(i, j) = spare;
                have_spare = false;
                continue;
            }
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double phi = 2.0 * std::numbers::pi * uniform();
            g(i, j) = r * std::cos(phi);
            spare = r * std::sin(phi);
            have_spare = true;
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(num_sites, num_sites);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < num_sites; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    return PartialIsometry::from_matrix(q.topRows(rows), std::max(num_sites, kDefaultMaxSites));
}

CorrelatedState build_state(StateFamily family, int n, int l, std::uint64_t seed) {
    if (n < 1) throw ValidationError("need at least one particle");
    if (family == StateFamily::weak_correlated && n < 2) {
        throw ValidationError("weak family needs N >= 2");
    }
    if (family == StateFamily::strong_correlated && n < 4) {
        throw ValidationError("strong family needs N >= 4");
    }
    const int rows = family_rows(family, n);
    if (rows > l) {
        throw ValidationError("family '" + std::string(to_string(family)) + "' needs "
                              + std::to_string(rows) + " orbitals but L = " + std::to_string(l));
    }
    auto u = random_partial_isometry(rows, l, seed);
    auto range = [](int from, int to) {
        Subset s;
        for (int i = from; i <= to; ++i) s.push_back(i);
        return s;
    };
    std::vector<DeterminantTerm> terms;
    switch (family) {
    case StateFamily::slater:
        terms.push_back({1.0, range(0, n - 1)});
        break;
    case StateFamily::weak_correlated: {
        auto second = range(0, n - 3);
        second.push_back(n);
        second.push_back(n + 1);
        terms.push_back({std::sqrt(0.9), range(0, n - 1)});
        terms.push_back({std::sqrt(0.1), second});
        break;
    }
    case StateFamily::strong_correlated: {
        auto second = range(0, n - 3);
        second.push_back(n);
        second.push_back(n + 1);
        terms.push_back({std::sqrt(0.4), range(0, n - 1)});
        terms.push_back({std::sqrt(0.3), second});
        terms.push_back({std::sqrt(0.3), range(n - 2, 2 * n - 3)});
        break;
    }
    }
    return CorrelatedState::create(std::move(u), std::move(terms));
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (num_particles < 1 || num_sites < 1 || num_particles > num_sites) {
        throw ValidationError("need 1 <= N <= L");
    }
    if (num_sites > kDefaultMaxSites) {
        throw ValidationError("L = " + std::to_string(num_sites) + " exceeds the dense limit "
                              + std::to_string(kDefaultMaxSites));
    }
    if (cut == 0 && num_sites % 2 != 0) throw ValidationError("default cut L/2 needs even L");
    check_cut(num_sites, resolved_cut());
    if (family_rows(family, num_particles) > num_sites) {
        throw ValidationError("family orbital count exceeds L");
    }
    if (family == StateFamily::strong_correlated && num_particles < 4) {
        throw ValidationError("strong family needs N >= 4");
    }
    if (family == StateFamily::weak_correlated && num_particles < 2) {
        throw ValidationError("weak family needs N >= 2");
    }
    if (methods.empty()) throw ValidationError("at least one method is required");
    if (threads < 0) throw ValidationError("threads must be >= 0");
    anneal.validate();
}

ExperimentConfig figure_preset(int figure) {
    ExperimentConfig cfg;
    cfg.num_particles = 8;
    cfg.num_sites = 16;
    switch (figure) {
    case 2:
        cfg.family = StateFamily::slater;
        cfg.methods = {ExperimentMethod::canonical, ExperimentMethod::fiedler,
                       ExperimentMethod::prefactor_exact, ExperimentMethod::prefactor_anneal};
        break;
    case 3:
    case 4:
        cfg.family = figure == 3 ? StateFamily::weak_correlated : StateFamily::strong_correlated;
        cfg.methods = {ExperimentMethod::canonical, ExperimentMethod::fiedler,
                       ExperimentMethod::dominant_prefactor, ExperimentMethod::weighted_prefactor};
        break;
    default:
        throw ValidationError("figure preset must be 2, 3 or 4");
    }
    return cfg;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SLATERTT_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

AnnealConfig seeded(const AnnealConfig& base, std::uint64_t seed) {
    AnnealConfig a = base;
    a.seed = seed;
    return a;
}

Subset head(const Ordering& o, int size) {
    Subset s(o.permutation().begin(), o.permutation().begin() + size);
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

OrderingResult experiment_ordering(const CorrelatedState& state, const OccupationTensor& tensor,
                                   ExperimentMethod method, const ExperimentConfig& cfg,
                                   std::uint64_t seed) {
    const int l = state.num_sites();
    const int k = cfg.resolved_cut();
    const auto fiedler = [&] { return fiedler_order(mutual_information(tensor)); };
    const auto warm = [&](int size) -> std::optional<Subset> {
        if (cfg.anneal.warm_start != WarmStart::fiedler) return std::nullopt;
        return head(fiedler().ordering, size);
    };
    const auto dominant = [&] { return state.term_isometry(state.dominant_term()); };

    switch (method) {
    case ExperimentMethod::canonical:
        return canonical_order(l);
    case ExperimentMethod::fiedler:
        return fiedler();
    case ExperimentMethod::prefactor_exact:
    case ExperimentMethod::dominant_prefactor: {
        if (method == ExperimentMethod::prefactor_exact && state.terms().size() != 1) {
            throw ValidationError("prefactor_exact needs a single determinant");
        }
        const auto u = dominant();
        if (cfg.anneal_on_cap && binomial(l, k) > cfg.exhaustive_cap) {
            return anneal_prefactor(u, seeded(cfg.anneal, seed), warm(k), k);
        }
        auto r = best_prefactor_exhaustive(u, k, cfg.exhaustive_cap);
        r.method = OrderingMethod::prefactor_exact;
        return r;
    }
    case ExperimentMethod::prefactor_anneal: {
        if (state.terms().size() != 1) {
            throw ValidationError("prefactor_anneal needs a single determinant");
        }
        return anneal_prefactor(dominant(), seeded(cfg.anneal, seed), warm(k), k);
    }
    case ExperimentMethod::weighted_prefactor:
        if (cfg.anneal_on_cap && binomial(l, k) > cfg.exhaustive_cap) {
            return anneal_weighted_prefactor(state, seeded(cfg.anneal, seed), k, warm(k));
        }
        return best_weighted_prefactor(state, k, cfg.exhaustive_cap);
    case ExperimentMethod::weighted_prefactor_anneal:
        return anneal_weighted_prefactor(state, seeded(cfg.anneal, seed), k, warm(k));
    }
    throw ValidationError("unhandled method");
}

namespace {

struct TrialOutput {
    std::vector<CutSpectrum> spectra;  // per method
    std::vector<double> seconds;       // per method
    std::vector<std::string> warnings;
    int fallbacks = 0;
};

TrialOutput run_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto state = build_state(cfg.family, cfg.num_particles, cfg.num_sites, seed);
    const auto tensor = correlated_tensor(state);
    const int k = cfg.resolved_cut();
    TrialOutput out;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        const auto start = std::chrono::steady_clock::now();
        const auto method = cfg.methods[m];
        const auto ord = experiment_ordering(state, tensor, method, cfg, splitmix64(seed ^ m));
        for (const auto& w : ord.warnings) {
            out.warnings.push_back(std::string(to_string(method)) + ": " + w);
        }
        const auto reordered = apply_ordering(tensor, ord.ordering);
        CutSpectrum spec;
        switch (cfg.route) {
        case SpectrumRoute::sectors:
            spec = cut_spectrum_sectors(reordered, k);
            break;
        case SpectrumRoute::dense:
            spec = cut_spectrum_dense(reordered, k);
            break;
        case SpectrumRoute::block:
            if (state.terms().size() == 1) {
                try {
                    spec = slater_cut_spectrum_block(
                        permute_columns(state.term_isometry(0), ord.ordering), k);
                    break;
                } catch (const DegeneracyError&) {
                    ++out.fallbacks;
                }
            }
            spec = cut_spectrum_dense(reordered, k);
            break;
        }
        out.spectra.push_back(std::move(spec));
        out.seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return out;
}

MethodStats aggregate(ExperimentMethod method, const std::vector<TrialOutput>& trials,
                      std::size_t m) {
    MethodStats s;
    s.method = method;
    const std::size_t len = trials.front().spectra[m].values.size();
    const std::size_t t_count = trials.size();
    s.mean_log10.resize(len);
    s.std_log10.resize(len);
    s.median_log10.resize(len);
    s.q25_log10.resize(len);
    s.q75_log10.resize(len);
    s.zero_count.assign(len, 0);
    std::vector<double> col(t_count);
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t t = 0; t < t_count; ++t) {
            const double v = trials[t].spectra[m].values[i];
            if (v == 0.0) ++s.zero_count[i];
            col[t] = std::log10(std::max(v, kLogFloor));
        }
        double sum = 0.0;
        for (double x : col) sum += x;
        const double mean = sum / static_cast<double>(t_count);
        double sq = 0.0;
        for (double x : col) sq += (x - mean) * (x - mean);
        s.mean_log10[i] = mean;
        s.std_log10[i] = t_count > 1 ? std::sqrt(sq / static_cast<double>(t_count - 1)) : 0.0;
        std::vector<double> sorted(col);
        std::sort(sorted.begin(), sorted.end());
        s.median_log10[i] = quantile_sorted(sorted, 0.5);
        s.q25_log10[i] = quantile_sorted(sorted, 0.25);
        s.q75_log10[i] = quantile_sorted(sorted, 0.75);
    }
    for (const auto& t : trials) s.wall_seconds += t.seconds[m];
    return s;
}

}  // namespace

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
    cfg.validate();
    EnsembleResult result;
    result.config = cfg;
    result.version = SLATERTT_VERSION;
    const auto n_trials = static_cast<std::size_t>(cfg.trials);
    for (std::size_t t = 0; t < n_trials; ++t) result.seeds.push_back(trial_seed(cfg.master_seed, t));

    std::vector<std::optional<TrialOutput>> outputs(n_trials);
    std::vector<std::exception_ptr> errors(n_trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < n_trials; t = next++) {
            try {
                outputs[t] = run_trial(cfg, result.seeds[t]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const int workers = std::min<int>(resolve_threads(cfg.threads), cfg.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<TrialOutput> trials;
    trials.reserve(n_trials);
    for (auto& o : outputs) trials.push_back(std::move(*o));

    std::map<std::string, int> warning_counts;
    for (const auto& t : trials) {
        result.block_fallbacks += t.fallbacks;
        for (const auto& w : t.warnings) ++warning_counts[w];
    }
    for (const auto& [w, c] : warning_counts) {
        result.warnings.push_back(w + " (" + std::to_string(c) + " trials)");
    }
    if (result.block_fallbacks > 0) {
        result.warnings.push_back("block spectrum fell back to dense SVD in "
                                  + std::to_string(result.block_fallbacks) + " trials");
    }
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        result.stats.push_back(aggregate(cfg.methods[m], trials, m));
        if (cfg.keep_trial_spectra) {
            std::vector<CutSpectrum> per;
            for (const auto& t : trials) per.push_back(t.spectra[m]);
            result.trial_spectra.push_back(std::move(per));
        }
    }
    return result;
}

}  // namespace slatertt
