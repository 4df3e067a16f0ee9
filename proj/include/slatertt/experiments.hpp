// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file experiments.hpp
 * @brief Random-state ensembles and singular-value statistics per ordering method.
 *
 * Each trial draws its own seed from (master seed, trial index), so trials run
 * in any order on any number of threads and the aggregated statistics are
 * identical bit for bit.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slatertt/ordering.hpp"
#include "slatertt/spectra.hpp"
#include "slatertt/tensor_core.hpp"

namespace slatertt {

enum class StateFamily { slater, weak_correlated, strong_correlated };

std::string_view to_string(StateFamily f);
/// Accepts the canonical names and the short forms "weak" / "strong".
StateFamily state_family_from_string(std::string_view s);

/// Number of orbitals (rows of U) a family needs for N particles.
int family_rows(StateFamily f, int num_particles);

/// Ordering methods as run inside an ensemble. dominant_prefactor minimizes the
/// prefactor of the largest-amplitude determinant of a correlated state.
enum class ExperimentMethod {
    canonical,
    fiedler,
    prefactor_exact,
    prefactor_anneal,
    dominant_prefactor,
    weighted_prefactor,
    weighted_prefactor_anneal,
};

std::string_view to_string(ExperimentMethod m);
ExperimentMethod experiment_method_from_string(std::string_view s);

enum class SpectrumRoute { sectors, dense, block };

std::string_view to_string(SpectrumRoute r);
SpectrumRoute spectrum_route_from_string(std::string_view s);

/// 64-bit finalizer of SplitMix64.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// Seed of trial `t`; a pure function of (master, t).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t t) noexcept;

/// First `rows` rows of Q from the QR factorization of an L x L matrix with i.i.d.
/// standard normal entries; columns of Q are flipped so that diag(R) > 0.
/// Normals come from a fixed Box-Muller transform over mt19937_64, so the result
/// depends only on the seed.
PartialIsometry random_partial_isometry(int rows, int num_sites, std::uint64_t seed);

/// slater: one term {0..N-1}. weak: sqrt(0.9) {0..N-1} + sqrt(0.1) {0..N-3, N, N+1}
/// over N+2 orbitals. strong: sqrt(0.4), sqrt(0.3), sqrt(0.3) with the extra term
/// {N-2..2N-3} over 2N-2 orbitals.
CorrelatedState build_state(StateFamily family, int num_particles, int num_sites,
                            std::uint64_t seed);

struct ExperimentConfig {
    StateFamily family = StateFamily::slater;
    int num_particles = 8;
    int num_sites = 16;
    int trials = 50;
    std::uint64_t master_seed = 0;
    int cut = 0;  ///< 0 selects L/2
    std::vector<ExperimentMethod> methods;
    AnnealConfig anneal;
    SpectrumRoute route = SpectrumRoute::sectors;
    std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
    /// Search the annealing variant when an exhaustive search exceeds the cap.
    bool anneal_on_cap = false;
    int threads = 0;  ///< 0 reads SLATERTT_THREADS, then hardware concurrency
    bool keep_trial_spectra = false;

    int resolved_cut() const { return cut == 0 ? num_sites / 2 : cut; }
    void validate() const;
};

/// Figure presets: 2 = slater family, 3 = weak, 4 = strong, all with N = 8, L = 16.
ExperimentConfig figure_preset(int figure);

struct MethodStats {
    ExperimentMethod method = ExperimentMethod::canonical;
    /// Per singular-value index (0-based here, 1-based in CSV output), over trials,
    /// of log10(max(sigma, 1e-300)).
    std::vector<double> mean_log10;
    std::vector<double> std_log10;  ///< sample standard deviation, 0 for one trial
    std::vector<double> median_log10;
    std::vector<double> q25_log10;
    std::vector<double> q75_log10;
    std::vector<int> zero_count;    ///< trials with sigma exactly 0 at this index
    double wall_seconds = 0.0;      ///< summed over trials (not deterministic)
};

struct EnsembleResult {
    ExperimentConfig config;
    std::vector<std::uint64_t> seeds;
    std::vector<MethodStats> stats;  ///< same order as config.methods
    std::vector<std::string> warnings;
    int block_fallbacks = 0;  ///< block route trials that fell back to the dense SVD
    /// trial_spectra[m][t], filled when config.keep_trial_spectra is set.
    std::vector<std::vector<CutSpectrum>> trial_spectra;
    std::string version;
};

/// Resolved worker count for `requested` (0 reads the environment).
int resolve_threads(int requested);

inline constexpr double kLogFloor = 1e-300;

EnsembleResult run_ensemble(const ExperimentConfig& cfg);

/// Ordering for one method on one state; exposed for tests and the CLI.
OrderingResult experiment_ordering(const CorrelatedState& state, const OccupationTensor& tensor,
                                   ExperimentMethod method, const ExperimentConfig& cfg,
                                   std::uint64_t seed);

/// Linear-interpolation quantile (type 7) of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace slatertt
