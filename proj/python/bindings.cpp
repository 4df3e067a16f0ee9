// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slatertt/errors.hpp"
#include "slatertt/experiments.hpp"
#include "slatertt/ordering.hpp"
#include "slatertt/rdm.hpp"
#include "slatertt/selftest.hpp"
#include "slatertt/spectra.hpp"
#include "slatertt/tensor_core.hpp"

namespace py = pybind11;
using namespace slatertt;

namespace {

PartialIsometry isometry(const Eigen::MatrixXd& u) { return PartialIsometry::from_matrix(u); }

Eigen::VectorXd to_vector(std::span<const double> v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

CutSpectrum spectrum_of(const Eigen::MatrixXd& u, int k, const std::string& method) {
    const auto iso = isometry(u);
    if (method == "block") return slater_cut_spectrum_block(iso, k);
    const auto t = slater_coefficients(iso);
    if (method == "dense") return cut_spectrum_dense(t, k);
    if (method == "sectors") return cut_spectrum_sectors(t, k);
    throw ValidationError("unknown spectrum method '" + method + "'");
}

py::dict ordering_dict(const OrderingResult& r) {
    py::dict d;
    d["permutation"] = r.ordering.permutation();
    d["method"] = std::string(to_string(r.method));
    d["objective"] = r.objective ? py::cast(*r.objective) : py::none();
    d["bipartition"] = r.bipartition ? py::cast(*r.bipartition) : py::none();
    d["seed"] = r.seed ? py::cast(*r.seed) : py::none();
    d["warnings"] = r.warnings;
    return d;
}

AnnealConfig anneal_config(std::uint64_t seed, double tau0, double decay, std::uint64_t iterations,
                           const std::string& warm) {
    AnnealConfig cfg;
    cfg.seed = seed;
    cfg.initial_temperature = tau0;
    cfg.decay = decay;
    cfg.max_iterations = iterations;
    if (warm == "fiedler") cfg.warm_start = WarmStart::fiedler;
    else if (warm == "canonical") cfg.warm_start = WarmStart::canonical;
    else if (warm == "random") cfg.warm_start = WarmStart::random;
    else throw ValidationError("unknown warm start '" + warm + "'");
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Occupation tensors of Slater determinants, cut spectra and orbital orderings";
    m.attr("__version__") = SLATERTT_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
    py::register_exception<DegeneracyError>(m, "DegeneracyError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    m.def("random_isometry", [](int rows, int num_sites, std::uint64_t seed) {
        return random_partial_isometry(rows, num_sites, seed).matrix();
    }, py::arg("rows"), py::arg("num_sites"), py::arg("seed"),
       "Haar-random matrix with orthonormal rows, reproducible from the seed.");

    m.def("slater_coefficients", [](const Eigen::MatrixXd& u) {
        return to_vector(slater_coefficients(isometry(u)).coefficients());
    }, py::arg("u"), "Dense 2^L coefficient vector; site 0 is the most significant bit.");

    m.def("cut_spectrum", [](const Eigen::MatrixXd& u, int k, const std::string& method) {
        const auto s = spectrum_of(u, k, method);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(s.values.data(), s.values.size()));
    }, py::arg("u"), py::arg("k"), py::arg("method") = "sectors",
       "Singular values of the cut-k matricization, descending; method is dense, sectors or block.");

    m.def("prefactor", [](const Eigen::MatrixXd& u, int k) { return prefactor(isometry(u), k); },
          py::arg("u"), py::arg("k"));

    m.def("inversion_residual", [](const Eigen::MatrixXd& u, int k) {
        auto s = spectrum_of(u, k, "sectors");
        s.prefactor = prefactor(isometry(u), k);
        return check_inversion_symmetry(s);
    }, py::arg("u"), py::arg("k"));

    m.def("mutual_information", [](const Eigen::MatrixXd& u) { return mutual_information(isometry(u)).values; },
          py::arg("u"));

    m.def("two_orbital_rdm", [](const Eigen::MatrixXd& u, int i, int j) {
        return Eigen::MatrixXd(rdm2_slater(isometry(u), i, j).rho);
    }, py::arg("u"), py::arg("i"), py::arg("j"));

    m.def("fiedler_order", [](const Eigen::MatrixXd& u) {
        return ordering_dict(fiedler_order(mutual_information(isometry(u))));
    }, py::arg("u"));

    m.def("best_prefactor_order", [](const Eigen::MatrixXd& u, int subset_size, std::uint64_t cap) {
        return ordering_dict(best_prefactor_exhaustive(isometry(u), subset_size, cap));
    }, py::arg("u"), py::arg("subset_size") = 0, py::arg("cap") = kDefaultExhaustiveCap);

    m.def("anneal_prefactor_order",
          [](const Eigen::MatrixXd& u, std::uint64_t seed, double tau0, double decay, std::uint64_t iterations,
             const std::string& warm_start, int subset_size) {
              const auto cfg = anneal_config(seed, tau0, decay, iterations, warm_start);
              return ordering_dict(anneal_prefactor(isometry(u), cfg, std::nullopt, subset_size));
          },
          py::arg("u"), py::arg("seed") = 0, py::arg("tau0") = 1.0, py::arg("decay") = 0.99,
          py::arg("iterations") = 0, py::arg("warm_start") = "fiedler", py::arg("subset_size") = 0);

    m.def("apply_permutation", [](const Eigen::MatrixXd& u, std::vector<int> perm) {
        return permute_columns(isometry(u), Ordering::from_permutation(std::move(perm))).matrix();
    }, py::arg("u"), py::arg("permutation"), "Columns reordered so position p holds old label perm[p].");

    m.def("run_experiment",
          [](int figure, int trials, std::uint64_t seed, int threads, std::vector<std::string> methods) {
              auto cfg = figure_preset(figure);
              cfg.trials = trials;
              cfg.master_seed = seed;
              cfg.threads = threads;
              if (!methods.empty()) {
                  cfg.methods.clear();
                  for (const auto& name : methods) cfg.methods.push_back(experiment_method_from_string(name));
              }
              cfg.validate();
              EnsembleResult r;
              {
                  py::gil_scoped_release release;
                  r = run_ensemble(cfg);
              }
              py::dict out;
              for (const auto& s : r.stats) {
                  py::dict d;
                  d["mean_log10"] = s.mean_log10;
                  d["std_log10"] = s.std_log10;
                  d["median_log10"] = s.median_log10;
                  d["q25_log10"] = s.q25_log10;
                  d["q75_log10"] = s.q75_log10;
                  d["zero_count"] = s.zero_count;
                  out[py::str(std::string(to_string(s.method)))] = d;
              }
              py::dict result;
              result["stats"] = out;
              result["seeds"] = r.seeds;
              result["warnings"] = r.warnings;
              return result;
          },
          py::arg("figure"), py::arg("trials") = 50, py::arg("seed") = 0, py::arg("threads") = 0,
          py::arg("methods") = std::vector<std::string>{});

    m.def("selftest", [](std::uint64_t seed, double scale) {
        std::vector<SuiteResult> results;
        {
            py::gil_scoped_release release;
            results = run_selftest(seed, scale);
        }
        py::list out;
        for (const auto& r : results) {
            py::dict d;
            d["name"] = r.name;
            d["cases"] = r.cases;
            d["failures"] = r.failures;
            d["max_error"] = r.max_error;
            d["tolerance"] = r.tolerance;
            d["passed"] = r.passed();
            out.append(d);
        }
        return out;
    }, py::arg("seed") = 2024, py::arg("scale") = 1.0);
}
