// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

// slatertt command-line tool. Exit codes: 0 success, 1 unexpected failure,
// 2 bad arguments or input files, 3 invariant violation, 4 search cap exceeded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slatertt/errors.hpp"
#include "slatertt/experiments.hpp"
#include "slatertt/io.hpp"
#include "slatertt/ordering.hpp"
#include "slatertt/rdm.hpp"
#include "slatertt/selftest.hpp"
#include "slatertt/spectra.hpp"

namespace fs = std::filesystem;
using namespace slatertt;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitCapacity = 4;

struct StateOptions {
    std::string input;    // U as CSV
    std::string state;    // JSON state file
    std::string family = "slater";
    int n = 0;
    int l = 0;
    std::string permutation;  // comma-separated, applied before any computation
    std::string ordering;     // JSON file with a "permutation" array

    void add(CLI::App* app) {
        app->add_option("--input", input, "Orbital matrix U as CSV (N rows, L columns)");
        app->add_option("--state", state, "State JSON (orbitals and determinant terms)");
        app->add_option("--family", family, "Random state family: slater|weak|strong");
        app->add_option("--n", n, "Particles for a random state");
        app->add_option("--l", l, "Sites for a random state");
        app->add_option("--permutation", permutation,
                        "Comma-separated ordering, position p holds old label perm[p]");
        app->add_option("--ordering", ordering, "Ordering JSON as written by 'order'");
    }
};

struct Output {
    std::string path;
    bool to_stdout = false;

    void add(CLI::App* app, const std::string& fallback) {
        path = fallback;
        app->add_option("--out", path, "Output file")->capture_default_str();
        app->add_flag("--stdout", to_stdout, "Write data to stdout instead of --out");
    }

    void emit(const std::string& text) const {
        if (to_stdout) {
            std::cout << text;
            std::cout.flush();
            return;
        }
        io::write_text(path, text);
        std::cerr << "wrote " << path << "\n";
    }
};

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("invalid integer '" + tok + "' in list", 1, 0);
        }
    }
    return out;
}

io::Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    try {
        return io::Json::parse(in);
    } catch (const io::Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what(), 0,
                         static_cast<int>(e.byte));
    }
}

CorrelatedState load_state(const StateOptions& o, std::uint64_t seed) {
    std::optional<CorrelatedState> state;
    try {
        if (!o.input.empty()) {
            auto u = PartialIsometry::from_matrix(io::read_matrix_csv(o.input));
            Subset all(u.num_particles());
            for (int i = 0; i < u.num_particles(); ++i) all[i] = i;
            state = CorrelatedState::create(std::move(u), {{1.0, all}});
        } else if (!o.state.empty()) {
            state = io::state_from_json(read_json(o.state));
        }
    } catch (const ValidationError& e) {
        // well-formed input that breaks the orthonormality or normalization contract
        throw ConsistencyError(e.what());
    }
    if (!state) {
        if (o.n < 1 || o.l < 1) {
            throw ValidationError("give --input, --state, or --n and --l for a random state");
        }
        state = build_state(state_family_from_string(o.family), o.n, o.l, seed);
    }
    std::optional<Ordering> ord;
    if (!o.permutation.empty()) ord = Ordering::from_permutation(parse_int_list(o.permutation));
    if (!o.ordering.empty()) {
        try {
            ord = Ordering::from_permutation(read_json(o.ordering).at("permutation").get<std::vector<int>>());
        } catch (const io::Json::exception& e) {
            throw ParseError(std::string("ordering file: ") + e.what(), 0, 0);
        }
    }
    if (ord) state = permute_sites(*state, *ord);
    return *state;
}

std::string spectra_text(const std::vector<CutSpectrum>& s) {
    std::ostringstream out;
    io::write_spectra_csv(out, s);
    return out.str();
}

// ---------------------------------------------------------------------------

struct SpectrumCmd {
    StateOptions state;
    Output out;
    int cut = 0;
    bool all_cuts = false;
    std::string method = "dense";
    std::uint64_t seed = 0;
    std::string tensor_out;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("spectrum", "Singular values of cut matricizations");
        state.add(app);
        out.add(app, "spectrum.csv");
        app->add_option("--cut", cut, "Cut index k (1..L-1)");
        app->add_flag("--all-cuts", all_cuts, "Every cut 1..L-1");
        app->add_option("--method", method, "dense|sectors|block")->capture_default_str();
        app->add_option("--seed", seed, "Seed for random states")->capture_default_str();
        app->add_option("--tensor-out", tensor_out, "Also write the occupation tensor CSV");
        app->callback([this] { run(); });
    }

    void run() {
        const auto s = load_state(state, seed);
        const auto t = correlated_tensor(s);
        const int l = s.num_sites();
        std::vector<int> cuts;
        if (all_cuts) {
            for (int k = 1; k < l; ++k) cuts.push_back(k);
        } else {
            check_cut(l, cut == 0 ? l / 2 : cut);
            cuts.push_back(cut == 0 ? l / 2 : cut);
        }
        const bool slater = s.terms().size() == 1;
        const auto route = spectrum_route_from_string(method);
        if (route == SpectrumRoute::block && !slater) {
            throw ValidationError("the block method needs a single determinant");
        }
        std::vector<CutSpectrum> spectra;
        double worst = 0.0;
        for (int k : cuts) {
            CutSpectrum sp;
            if (route == SpectrumRoute::block) {
                try {
                    sp = slater_cut_spectrum_block(s.term_isometry(0), k);
                } catch (const DegeneracyError& e) {
                    std::cerr << "warning: cut " << k << ": " << e.what() << "; using dense SVD\n";
                    sp = cut_spectrum_dense(t, k);
                }
            } else {
                sp = route == SpectrumRoute::dense ? cut_spectrum_dense(t, k) : cut_spectrum_sectors(t, k);
            }
            if (slater) {
                const auto u = s.term_isometry(0);
                sp.prefactor = prefactor(u, k);
                std::cerr << "cut " << k << ": rank " << sp.rank << ", prefactor "
                          << io::format_double(*sp.prefactor);
                const auto [left, right] = assumption_margins(u, k);
                if (std::min(left, right) > kAssumptionCutoff) {
                    const double r = check_inversion_symmetry(sp);
                    worst = std::max(worst, r);
                    std::cerr << ", inversion residual " << io::format_double(r) << "\n";
                } else {
                    // relative residual is meaningless once the prefactor degenerates
                    std::cerr << ", degenerate cut (no residual)\n";
                }
            } else {
                std::cerr << "cut " << k << ": rank " << sp.rank << "\n";
            }
            spectra.push_back(std::move(sp));
        }
        if (!tensor_out.empty()) {
            std::ostringstream ts;
            io::write_tensor_csv(ts, t);
            io::write_text(tensor_out, ts.str());
        }
        out.emit(spectra_text(spectra));
        if (slater && worst > 1e-9) {
            throw ConsistencyError("inversion symmetry residual " + io::format_double(worst)
                                   + " exceeds 1e-9");
        }
    }
};

struct OrderCmd {
    StateOptions state;
    Output out;
    std::string method = "fiedler";
    bool anneal = false;
    bool compare = false;
    std::uint64_t seed = 0;
    std::uint64_t cap = kDefaultExhaustiveCap;
    int subset_size = 0;
    int cut = 0;
    AnnealConfig cfg;
    std::string warm = "fiedler";
    std::string compare_out = "compare.csv";

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("order", "Compute an orbital ordering");
        state.add(app);
        out.add(app, "ordering.json");
        app->add_option("--method", method, "canonical|fiedler|prefactor|anneal|weighted")
            ->capture_default_str();
        app->add_flag("--anneal", anneal, "Fall back to annealing when the exhaustive cap is exceeded");
        app->add_option("--cap", cap, "Maximum subsets for exhaustive search")->capture_default_str();
        app->add_option("--subset-size", subset_size, "Labels left of the cut (prefactor; 0 = N)");
        app->add_option("--cut", cut, "Cut for the weighted objective (0 = L/2)");
        app->add_option("--seed", seed, "Seed for random states and annealing")->capture_default_str();
        app->add_option("--tau0", cfg.initial_temperature, "Initial temperature")->capture_default_str();
        app->add_option("--decay", cfg.decay, "Temperature decay per iteration")->capture_default_str();
        app->add_option("--iterations", cfg.max_iterations, "Annealing iterations (0 = C(L,size)/2)");
        app->add_option("--warm-start", warm, "fiedler|canonical|random")->capture_default_str();
        app->add_flag("--compare", compare, "Also write mid-cut spectra before and after");
        app->add_option("--compare-out", compare_out, "Spectra file for --compare")->capture_default_str();
        app->callback([this] { run(); });
    }

    void run() {
        const auto s = load_state(state, seed);
        cfg.seed = seed;
        cfg.warm_start = warm == "canonical" ? WarmStart::canonical
                         : warm == "random"  ? WarmStart::random
                         : warm == "fiedler" ? WarmStart::fiedler
                                             : throw ValidationError("unknown warm start '" + warm + "'");
        const int l = s.num_sites();
        const bool slater = s.terms().size() == 1;
        auto need_slater = [&] {
            if (!slater) throw ValidationError("method '" + method + "' needs a single determinant");
            return s.term_isometry(0);
        };
        std::optional<OrderingResult> r;
        if (method == "canonical") {
            r = canonical_order(l);
        } else if (method == "fiedler") {
            r = slater ? fiedler_order(mutual_information(s.term_isometry(0)))
                       : fiedler_order(mutual_information(correlated_tensor(s)));
        } else if (method == "prefactor") {
            const auto u = need_slater();
            try {
                r = best_prefactor_exhaustive(u, subset_size, cap);
            } catch (const CapacityError& e) {
                if (!anneal) throw;
                std::cerr << "warning: " << e.what() << "\n";
                r = anneal_prefactor(u, cfg, std::nullopt, subset_size);
            }
        } else if (method == "anneal") {
            r = anneal_prefactor(need_slater(), cfg, std::nullopt, subset_size);
        } else if (method == "weighted") {
            try {
                r = best_weighted_prefactor(s, cut, cap);
            } catch (const CapacityError& e) {
                if (!anneal) throw;
                std::cerr << "warning: " << e.what() << "\n";
                r = anneal_weighted_prefactor(s, cfg, cut);
            }
        } else {
            throw ValidationError("unknown method '" + method + "'");
        }
        for (const auto& w : r->warnings) std::cerr << "warning: " << w << "\n";
        if (r->objective) std::cerr << "objective " << io::format_double(*r->objective) << "\n";
        if (compare) {
            const int k = l / 2;
            const auto before = cut_spectrum_sectors(correlated_tensor(s), k);
            const auto after = cut_spectrum_sectors(correlated_tensor(permute_sites(s, r->ordering)), k);
            io::write_text(compare_out, spectra_text({before, after}));
            std::cerr << "wrote " << compare_out << " (rows 1.." << before.values.size()
                      << " before, then after)\n";
        }
        out.emit(io::to_json(*r).dump(2) + "\n");
    }
};

struct RdmCmd {
    StateOptions state;
    Output out;
    std::string method = "auto";
    std::string pair;
    std::uint64_t seed = 0;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("rdm", "Orbital reduced density matrices and mutual information");
        state.add(app);
        out.add(app, "mutual_information.csv");
        app->add_option("--method", method, "auto|closed|brute (auto: closed for one determinant)")
            ->capture_default_str();
        app->add_option("--pair", pair, "i,j: write the 4x4 two-orbital matrix instead");
        app->add_option("--seed", seed, "Seed for random states")->capture_default_str();
        app->callback([this] { run(); });
    }

    void run() {
        const auto s = load_state(state, seed);
        const bool closed = method == "closed" || (method == "auto" && s.terms().size() == 1);
        if (method != "auto" && method != "closed" && method != "brute") {
            throw ValidationError("unknown rdm method '" + method + "'");
        }
        if (closed && s.terms().size() != 1) throw ValidationError("closed forms need a single determinant");
        std::ostringstream o;
        if (!pair.empty()) {
            const auto ij = parse_int_list(pair);
            if (ij.size() != 2) throw ParseError("--pair expects i,j", 1, 0);
            const auto rho = closed ? rdm2_slater(s.term_isometry(0), ij[0], ij[1]).rho
                                    : rdm2_brute(correlated_tensor(s), ij[0], ij[1]).rho;
            o << "00,01,10,11\n";
            io::write_matrix_csv(o, rho, false);
        } else {
            const auto g = closed ? mutual_information(s.term_isometry(0))
                                  : mutual_information(correlated_tensor(s));
            io::write_mutual_information_csv(o, g);
        }
        out.emit(o.str());
    }
};

struct ExperimentCmd {
    std::string config;
    int figure = 0;
    int trials = 0;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out_dir = "results";
    bool svg = false;
    bool to_stdout = false;
    std::vector<std::string> methods;
    std::string route;
    bool anneal_on_cap = false;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("experiment", "Run a random-state ensemble");
        app->add_option("--config", config, "Experiment config JSON");
        app->add_option("--figure", figure, "Preset 2 (slater), 3 (weak) or 4 (strong)");
        app->add_option("--trials", trials, "Number of trials");
        app->add_option("--seed", seed, "Master seed");
        app->add_option("--threads", threads, "Worker threads (default: SLATERTT_THREADS or all cores)");
        app->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
        app->add_option("--methods", methods, "Override the method list")->delimiter(',');
        app->add_option("--route", route, "Spectrum route sectors|dense|block");
        app->add_flag("--anneal", anneal_on_cap, "Anneal when an exhaustive search exceeds the cap");
        app->add_flag("--svg", svg, "Also write plot.svg");
        app->add_flag("--stdout", to_stdout, "Print the statistics CSVs to stdout");
        app->callback([this] { run(); });
    }

    void run() {
        ExperimentConfig cfg;
        if (!config.empty()) {
            cfg = io::experiment_config_from_json(read_json(config));
        } else if (figure != 0) {
            cfg = figure_preset(figure);
        } else {
            throw ValidationError("give --figure or --config");
        }
        if (figure != 0 && !config.empty()) {
            throw ValidationError("--figure and --config are mutually exclusive");
        }
        if (trials != 0) cfg.trials = trials;
        if (seed) cfg.master_seed = *seed;
        if (threads != 0) cfg.threads = threads;
        if (!route.empty()) cfg.route = spectrum_route_from_string(route);
        if (anneal_on_cap) cfg.anneal_on_cap = true;
        if (!methods.empty()) {
            cfg.methods.clear();
            for (const auto& m : methods) cfg.methods.push_back(experiment_method_from_string(m));
        }
        cfg.validate();

        const auto result = run_ensemble(cfg);
        std::vector<io::OutputFile> files;
        for (const auto& s : result.stats) {
            std::ostringstream o;
            io::write_stats_csv(o, s);
            const auto name = "stats_" + std::string(to_string(s.method)) + ".csv";
            io::write_text(fs::path(out_dir) / name, o.str());
            files.push_back({name, s.mean_log10.size()});
            if (to_stdout) std::cout << "# " << to_string(s.method) << "\n" << o.str();
        }
        if (svg) {
            io::write_text(fs::path(out_dir) / "plot.svg", io::stats_svg(result));
            files.push_back({"plot.svg", 0});
        }
        io::write_text(fs::path(out_dir) / "manifest.json", io::run_manifest(result, files).dump(2) + "\n");
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        std::cerr << "wrote " << files.size() + 1 << " files to " << out_dir << "\n";
    }
};

struct SelftestCmd {
    std::uint64_t seed = 2024;
    double scale = 1.0;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("selftest", "Run the randomized oracle suites");
        app->add_option("--seed", seed, "Seed")->capture_default_str();
        app->add_option("--scale", scale, "Multiplier on the case counts")->capture_default_str();
        app->callback([this] { run(); });
    }

    void run() {
        bool ok = true;
        for (const auto& r : run_selftest(seed, scale)) {
            std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.cases
                      << " cases, max error " << io::format_double(r.max_error) << " (tol "
                      << io::format_double(r.tolerance) << ")\n";
            ok = ok && r.passed();
        }
        if (!ok) throw ConsistencyError("selftest failed");
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slatertt: occupation tensors of Slater determinants and orbital orderings"};
    app.set_version_flag("--version", SLATERTT_VERSION);
    app.require_subcommand(1);
    SpectrumCmd spectrum;
    OrderCmd order;
    RdmCmd rdm;
    ExperimentCmd experiment;
    SelftestCmd selftest;
    spectrum.add(app);
    order.add(app);
    rdm.add(app);
    experiment.add(app);
    selftest.add(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
