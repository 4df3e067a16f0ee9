// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include "slatertt/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "slatertt/errors.hpp"

namespace slatertt::io {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Cell {
    std::string text;
    int column = 1;  // 1-based character column of the cell start
};

std::vector<Cell> split_cells(const std::string& line) {
    std::vector<Cell> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto end = comma == std::string::npos ? line.size() : comma;
        cells.push_back({trim(std::string_view(line).substr(start, end - start)),
                         static_cast<int>(start) + 1});
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* first = s.data();
    if (*first == '+') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool looks_complex(const std::string& s) {
    if (s.empty()) return false;
    const char last = s.back();
    return (last == 'i' || last == 'j' || last == 'I' || last == 'J')
           && s.find_first_of("0123456789") != std::string::npos;
}

double parse_cell(const Cell& c, int line) {
    if (looks_complex(c.text)) {
        throw ParseError("complex value '" + c.text + "' is not supported", line, c.column);
    }
    const auto v = parse_number(c.text);
    if (!v) throw ParseError("expected a real number, got '" + c.text + "'", line, c.column);
    if (!std::isfinite(*v)) throw ParseError("non-finite value '" + c.text + "'", line, c.column);
    return *v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_cells(line);
        if (first_content) {
            first_content = false;
            const bool header = std::none_of(cells.begin(), cells.end(), [](const Cell& c) {
                return parse_number(c.text).has_value() || looks_complex(c.text);
            });
            if (header) continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("expected " + std::to_string(rows.front().size()) + " columns, got "
                                 + std::to_string(row.size()),
                             line_no, cells.back().column);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data rows", line_no, 0);
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'", 0, 0);
    return parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& m, bool header) {
    if (header) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << "c" << j;
        out << '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
        out << '\n';
    }
}

void write_spectra_csv(std::ostream& out, const std::vector<CutSpectrum>& spectra) {
    out << "k,j,sigma,prefactor\n";
    for (const auto& s : spectra) {
        const std::string p = s.prefactor ? format_double(*s.prefactor) : "";
        for (std::size_t j = 0; j < s.values.size(); ++j) {
            out << s.cut << ',' << j + 1 << ',' << format_double(s.values[j]) << ',' << p << '\n';
        }
    }
}

std::vector<CutSpectrum> parse_spectra_csv(std::istream& in) {
    std::vector<CutSpectrum> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (line_no == 1 && trim(line).rfind("k,", 0) == 0) continue;
        const auto cells = split_cells(line);
        if (cells.size() != 4) throw ParseError("expected 4 columns", line_no, 1);
        const int k = static_cast<int>(parse_cell(cells[0], line_no));
        const int j = static_cast<int>(parse_cell(cells[1], line_no));
        const double sigma = parse_cell(cells[2], line_no);
        if (out.empty() || out.back().cut != k || j == 1) {
            out.push_back(CutSpectrum{});
            out.back().cut = k;
            if (!cells[3].text.empty()) out.back().prefactor = parse_cell(cells[3], line_no);
        }
        if (j != static_cast<int>(out.back().values.size()) + 1) {
            throw ParseError("singular value indices must run 1, 2, ...", line_no, cells[1].column);
        }
        out.back().values.push_back(sigma);
    }
    return out;
}

void write_tensor_csv(std::ostream& out, const OccupationTensor& t) {
    out << "bitstring,coefficient\n";
    const int l = t.num_sites();
    for (Index x = 0; x < t.size(); ++x) {
        if (t[x] == 0.0) continue;
        std::string bits(l, '0');
        for (int s = 0; s < l; ++s) {
            if (occupied(x, s, l)) bits[s] = '1';
        }
        out << bits << ',' << format_double(t[x]) << '\n';
    }
}

void write_mutual_information_csv(std::ostream& out, const MutualInfoGraph& g) {
    const int l = g.num_sites();
    for (int j = 0; j < l; ++j) out << (j ? "," : "") << "i" << j;
    out << '\n';
    write_matrix_csv(out, g.values, false);
}

Json to_json(const OrderingResult& r) {
    Json j;
    j["method"] = std::string(to_string(r.method));
    j["permutation"] = r.ordering.permutation();
    j["objective"] = r.objective ? Json(*r.objective) : Json(nullptr);
    j["bipartition"] = r.bipartition ? Json(*r.bipartition) : Json(nullptr);
    j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const ExperimentConfig& cfg) {
    Json j;
    j["family"] = std::string(to_string(cfg.family));
    j["N"] = cfg.num_particles;
    j["L"] = cfg.num_sites;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["cut"] = cfg.resolved_cut();
    std::vector<std::string> methods;
    for (auto m : cfg.methods) methods.emplace_back(to_string(m));
    j["methods"] = methods;
    j["anneal"] = {{"initial_temperature", cfg.anneal.initial_temperature},
                   {"decay", cfg.anneal.decay},
                   {"max_iterations", cfg.anneal.max_iterations},
                   {"warm_start", cfg.anneal.warm_start == WarmStart::fiedler     ? "fiedler"
                                  : cfg.anneal.warm_start == WarmStart::canonical ? "canonical"
                                                                                  : "random"}};
    j["spectrum_route"] = std::string(to_string(cfg.route));
    j["exhaustive_cap"] = cfg.exhaustive_cap;
    j["anneal_on_cap"] = cfg.anneal_on_cap;
    return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("experiment config must be a JSON object");
    ExperimentConfig cfg;
    try {
        if (j.contains("figure")) cfg = figure_preset(j.at("figure").get<int>());
        if (j.contains("family")) cfg.family = state_family_from_string(j.at("family").get<std::string>());
        if (j.contains("N")) cfg.num_particles = j.at("N").get<int>();
        if (j.contains("L")) cfg.num_sites = j.at("L").get<int>();
        if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
        if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("cut")) cfg.cut = j.at("cut").get<int>();
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : j.at("methods")) {
                cfg.methods.push_back(experiment_method_from_string(m.get<std::string>()));
            }
        }
        if (j.contains("anneal")) {
            const auto& a = j.at("anneal");
            if (a.contains("initial_temperature")) cfg.anneal.initial_temperature = a.at("initial_temperature").get<double>();
            if (a.contains("decay")) cfg.anneal.decay = a.at("decay").get<double>();
            if (a.contains("max_iterations")) cfg.anneal.max_iterations = a.at("max_iterations").get<std::uint64_t>();
            if (a.contains("warm_start")) {
                const auto w = a.at("warm_start").get<std::string>();
                if (w == "fiedler") cfg.anneal.warm_start = WarmStart::fiedler;
                else if (w == "canonical") cfg.anneal.warm_start = WarmStart::canonical;
                else if (w == "random") cfg.anneal.warm_start = WarmStart::random;
                else throw ValidationError("unknown warm start '" + w + "'");
            }
        }
        if (j.contains("spectrum_route")) cfg.route = spectrum_route_from_string(j.at("spectrum_route").get<std::string>());
        if (j.contains("exhaustive_cap")) cfg.exhaustive_cap = j.at("exhaustive_cap").get<std::uint64_t>();
        if (j.contains("anneal_on_cap")) cfg.anneal_on_cap = j.at("anneal_on_cap").get<bool>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("bad experiment config: ") + e.what());
    }
    if (cfg.methods.empty()) cfg.methods = figure_preset(cfg.family == StateFamily::slater ? 2 : 3).methods;
    cfg.validate();
    return cfg;
}

void write_stats_csv(std::ostream& out, const MethodStats& s) {
    out << "index,mean_log10,std_log10,median_log10,q25_log10,q75_log10,zero_count\n";
    for (std::size_t i = 0; i < s.mean_log10.size(); ++i) {
        out << i + 1 << ',' << format_double(s.mean_log10[i]) << ',' << format_double(s.std_log10[i])
            << ',' << format_double(s.median_log10[i]) << ',' << format_double(s.q25_log10[i]) << ','
            << format_double(s.q75_log10[i]) << ',' << s.zero_count[i] << '\n';
    }
}

Json run_manifest(const EnsembleResult& r, const std::vector<OutputFile>& outputs) {
    Json j;
    j["version"] = r.version;
    j["config"] = to_json(r.config);
    j["master_seed"] = r.config.master_seed;
    j["trial_seeds"] = r.seeds;
    Json times = Json::object();
    for (const auto& s : r.stats) times[std::string(to_string(s.method))] = s.wall_seconds;
    j["wall_seconds"] = times;
    j["warnings"] = r.warnings;
    j["block_fallbacks"] = r.block_fallbacks;
    j["log_floor"] = kLogFloor;
    Json files = Json::array();
    for (const auto& o : outputs) files.push_back({{"path", o.path}, {"rows", o.rows}});
    j["outputs"] = files;
    if (r.config.family != StateFamily::slater) {
        const auto state = build_state(r.config.family, r.config.num_particles,
                                       r.config.num_sites, r.seeds.front());
        j["terms"] = to_json(state)["terms"];
    }
    return j;
}

std::string stats_svg(const EnsembleResult& r) {
    constexpr double width = 800, height = 500, left = 70, right = 180, top = 30, bottom = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf"};
    double lo = 0.0, hi = -1e9;
    std::size_t len = 0;
    for (const auto& s : r.stats) {
        len = std::max(len, s.mean_log10.size());
        for (std::size_t i = 0; i < s.mean_log10.size(); ++i) {
            lo = std::min(lo, s.q25_log10[i]);
            hi = std::max(hi, s.q75_log10[i]);
        }
    }
    lo = std::max(std::floor(lo), -20.0);
    hi = std::ceil(std::max(hi, lo + 1.0));
    const double pw = width - left - right, ph = height - top - bottom;
    auto xs = [&](std::size_t i) { return left + pw * (len > 1 ? double(i) / double(len - 1) : 0.5); };
    auto ys = [&](double v) { return top + ph * (hi - std::clamp(v, lo, hi)) / (hi - lo); };

    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(2);
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t = lo; t <= hi; t += std::max(1.0, std::round((hi - lo) / 10))) {
        o << "<text x=\"" << left - 8 << "\" y=\"" << ys(t) + 4 << "\" text-anchor=\"end\">" << t
          << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">singular value index</text>\n";
    o << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
      << ")\" text-anchor=\"middle\">log10 sigma</text>\n";
    for (std::size_t m = 0; m < r.stats.size(); ++m) {
        const auto& s = r.stats[m];
        const char* c = colors[m % 7];
        o << "<polygon fill=\"" << c << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.q75_log10.size(); ++i) o << xs(i) << ',' << ys(s.q75_log10[i]) << ' ';
        for (std::size_t i = s.q25_log10.size(); i-- > 0;) o << xs(i) << ',' << ys(s.q25_log10[i]) << ' ';
        o << "\"/>\n<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.mean_log10.size(); ++i) o << xs(i) << ',' << ys(s.mean_log10[i]) << ' ';
        o << "\"/>\n";
        const double ly = top + 20 + 18 * double(m);
        o << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 30
          << "\" y2=\"" << ly << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << width - right + 36 << "\" y=\"" << ly + 4 << "\">" << to_string(s.method)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

CorrelatedState state_from_json(const Json& j) {
    try {
        const auto& rows = j.at("orbitals");
        if (!rows.is_array() || rows.empty()) throw ValidationError("'orbitals' must be a non-empty array");
        const auto n = rows.size();
        const auto l = rows.front().size();
        Eigen::MatrixXd u(n, l);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != l) throw ValidationError("ragged 'orbitals' rows");
            for (std::size_t k = 0; k < l; ++k) u(i, k) = rows[i][k].get<double>();
        }
        auto iso = PartialIsometry::from_matrix(std::move(u));
        std::vector<DeterminantTerm> terms;
        if (j.contains("terms")) {
            for (const auto& t : j.at("terms")) {
                terms.push_back({t.at("amplitude").get<double>(), t.at("orbitals").get<Subset>()});
            }
        } else {
            Subset all(n);
            for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
            terms.push_back({1.0, all});
        }
        return CorrelatedState::create(std::move(iso), std::move(terms));
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("bad state file: ") + e.what());
    }
}

Json to_json(const CorrelatedState& s) {
    Json j;
    const auto& u = s.orbitals().matrix();
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        std::vector<double> r(u.cols());
        for (Eigen::Index k = 0; k < u.cols(); ++k) r[k] = u(i, k);
        rows.push_back(r);
    }
    j["orbitals"] = rows;
    Json terms = Json::array();
    for (const auto& t : s.terms()) terms.push_back({{"amplitude", t.amplitude}, {"orbitals", t.orbitals}});
    j["terms"] = terms;
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace slatertt::io
