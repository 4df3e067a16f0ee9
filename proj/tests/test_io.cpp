// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "slatertt/errors.hpp"
#include "slatertt/io.hpp"

using namespace slatertt;
using testing::random_u;

TEST_CASE("matrix CSV round-trips bit for bit", "[io]") {
    std::mt19937_64 rng(51);
    for (int rep = 0; rep < 10; ++rep) {
        const auto u = random_u(3, 7, rng);
        for (bool header : {true, false}) {
            std::stringstream ss;
            io::write_matrix_csv(ss, u.matrix(), header);
            const auto back = io::parse_matrix_csv(ss);
            REQUIRE(back.rows() == 3);
            REQUIRE(back.cols() == 7);
            CHECK((back - u.matrix()).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("matrix CSV parsing", "[io]") {
    std::istringstream ok("c0,c1\n 1.5 , -2e-3\n0,1\n");
    const auto m = io::parse_matrix_csv(ok);
    CHECK(m.rows() == 2);
    CHECK(m(0, 1) == -2e-3);

    std::istringstream bad("1,2\n3,x\n");
    try {
        io::parse_matrix_csv(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);  // character column of "x"
    }

    std::istringstream complex("1,2+3j\n");
    CHECK_THROWS_AS(io::parse_matrix_csv(complex), ParseError);
    std::istringstream ragged("1,2\n3\n");
    try {
        io::parse_matrix_csv(ragged);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream empty("a,b\n");
    CHECK_THROWS_AS(io::parse_matrix_csv(empty), ParseError);
    std::istringstream inf("1,inf\n");
    CHECK_THROWS_AS(io::parse_matrix_csv(inf), ParseError);
    CHECK_THROWS_AS(io::read_matrix_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("spectra CSV round-trip", "[io]") {
    std::mt19937_64 rng(52);
    const auto u = random_u(3, 8, rng);
    const auto t = slater_coefficients(u);
    std::vector<CutSpectrum> all;
    for (int k = 1; k < 8; ++k) {
        auto s = cut_spectrum_sectors(t, k);
        s.prefactor = prefactor(u, k);
        all.push_back(s);
    }
    std::stringstream ss;
    io::write_spectra_csv(ss, all);
    const auto back = io::parse_spectra_csv(ss);
    REQUIRE(back.size() == all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(back[i].cut == all[i].cut);
        CHECK(back[i].values == all[i].values);
        REQUIRE(back[i].prefactor.has_value());
        CHECK(*back[i].prefactor == *all[i].prefactor);
    }
}

TEST_CASE("tensor and mutual information CSV", "[io]") {
    std::mt19937_64 rng(53);
    const auto u = random_u(2, 4, rng);
    std::stringstream ts;
    io::write_tensor_csv(ts, slater_coefficients(u));
    std::string line;
    int rows = 0;
    std::getline(ts, line);
    CHECK(line == "bitstring,coefficient");
    while (std::getline(ts, line)) {
        ++rows;
        CHECK(line.substr(0, 4).find_first_not_of("01") == std::string::npos);
    }
    CHECK(rows == 6);

    std::stringstream ms;
    io::write_mutual_information_csv(ms, mutual_information(u));
    const auto im = io::parse_matrix_csv(ms);
    CHECK(im.rows() == 4);
    CHECK((im - mutual_information(u).values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("experiment config JSON", "[io]") {
    auto cfg = figure_preset(3);
    cfg.trials = 7;
    cfg.master_seed = 123456789012345ULL;
    const auto back = io::experiment_config_from_json(io::to_json(cfg));
    CHECK(back.family == cfg.family);
    CHECK(back.trials == 7);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.methods == cfg.methods);
    CHECK(back.resolved_cut() == 8);

    const auto preset = io::experiment_config_from_json(io::Json{{"figure", 4}, {"trials", 2}});
    CHECK(preset.family == StateFamily::strong_correlated);
    CHECK(preset.trials == 2);

    CHECK_THROWS_AS(io::experiment_config_from_json(io::Json{{"trials", "many"}}), ValidationError);
    CHECK_THROWS_AS(io::experiment_config_from_json(io::Json{{"methods", {"nope"}}}), ValidationError);
    CHECK_THROWS_AS(io::experiment_config_from_json(io::Json::array()), ValidationError);
}

TEST_CASE("state JSON round-trip", "[io]") {
    const auto state = build_state(StateFamily::weak_correlated, 3, 8, 17);
    const auto back = io::state_from_json(io::to_json(state));
    CHECK((back.orbitals().matrix() - state.orbitals().matrix()).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(back.terms().size() == 2);
    CHECK(back.terms()[1].orbitals == state.terms()[1].orbitals);
    CHECK(back.terms()[1].amplitude == state.terms()[1].amplitude);

    const io::Json single{{"orbitals", {{1.0, 0.0}}}};
    CHECK(io::state_from_json(single).terms().size() == 1);
    CHECK_THROWS_AS(io::state_from_json(io::Json{{"orbitals", {{1.0, 0.0}, {1.0}}}}), ValidationError);
}

TEST_CASE("stats CSV, manifest and SVG", "[io]") {
    ExperimentConfig cfg = figure_preset(3);
    cfg.num_particles = 3;
    cfg.num_sites = 8;
    cfg.trials = 2;
    cfg.threads = 1;
    const auto r = run_ensemble(cfg);
    std::stringstream ss;
    io::write_stats_csv(ss, r.stats[0]);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "index,mean_log10,std_log10,median_log10,q25_log10,q75_log10,zero_count");
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 16);

    const auto m = io::run_manifest(r, {{"stats_canonical.csv", 16}});
    CHECK(m.at("trial_seeds").size() == 2);
    CHECK(m.at("config").at("family") == "weak_correlated");
    CHECK(m.at("outputs")[0].at("rows") == 16);
    CHECK(m.at("terms").size() == 2);
    CHECK(m.contains("version"));

    const auto svg = io::stats_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "slatertt_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    io::write_text(dir / "x.txt", "hello");
    std::ifstream in(dir / "x.txt");
    std::string text;
    std::getline(in, text);
    CHECK(text == "hello");
    std::filesystem::remove_all(dir.parent_path());
}
