// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief CSV and JSON interchange, run manifests and a minimal SVG plot.
 *
 * Doubles are written with 17 significant digits so parse(emit(x)) == x.
 * CSV files are UTF-8 with '.' as the decimal separator and one header row.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "slatertt/experiments.hpp"
#include "slatertt/ordering.hpp"
#include "slatertt/rdm.hpp"
#include "slatertt/spectra.hpp"
#include "slatertt/tensor_core.hpp"

namespace slatertt::io {

using Json = nlohmann::json;

/// %.17g formatting.
std::string format_double(double x);

/// Real matrix CSV. A first row that does not parse as numbers is treated as a header.
/// Throws ParseError (1-based line and column) on non-numeric cells, complex values
/// or ragged rows.
Eigen::MatrixXd parse_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& m,
                      bool header = true);

/// Columns k, j, sigma, prefactor (prefactor empty when unknown); j is 1-based.
void write_spectra_csv(std::ostream& out, const std::vector<CutSpectrum>& spectra);
std::vector<CutSpectrum> parse_spectra_csv(std::istream& in);

/// Columns bitstring, coefficient; only nonzero coefficients are listed.
void write_tensor_csv(std::ostream& out, const OccupationTensor& t);

/// L x L matrix with header i0..i{L-1}.
void write_mutual_information_csv(std::ostream& out, const MutualInfoGraph& g);

Json to_json(const OrderingResult& r);
Json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j);

/// Per-method statistics with columns index, mean_log10, std_log10, median_log10,
/// q25_log10, q75_log10, zero_count. The index is 1-based.
void write_stats_csv(std::ostream& out, const MethodStats& s);

struct OutputFile {
    std::string path;
    std::size_t rows = 0;  ///< data rows, header excluded
};

/// Config echo, seeds, version, wall times, warnings and the listed outputs.
Json run_manifest(const EnsembleResult& r, const std::vector<OutputFile>& outputs);

/// Mean curves with q25/q75 bands per method on a log10 axis.
std::string stats_svg(const EnsembleResult& r);

/// State file: {"orbitals": [[...], ...], "terms": [{"amplitude": a, "orbitals": [...]}]}.
/// Without "terms" the file describes a single determinant over all rows.
CorrelatedState state_from_json(const Json& j);
Json to_json(const CorrelatedState& s);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace slatertt::io
