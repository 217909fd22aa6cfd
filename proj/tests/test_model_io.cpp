#include <doctest.h>

#include "lzsim/model_io.hpp"

#include <cstdio>
#include <fstream>

using namespace lzsim;

TEST_CASE("custom model: real shorthand with coupling diagonal") {
    const auto input = parse_custom_model(R"({
        "A": [[0, 1], [1, 0]],
        "B": [1, -1],
        "C": [0, 0.5],
        "omega": 1.4,
        "n_fock": 12
    })");
    CHECK(input.A(0, 1) == Complex(1.0, 0.0));
    CHECK(input.b_pattern[1] == -1.0);
    CHECK(input.c_diagonal[1] == 0.5);
    CHECK(input.omega == 1.4);
    CHECK(input.n_fock == 12);
}

TEST_CASE("custom model: re/im form, defaults, and validation errors") {
    const auto input = parse_custom_model(R"({
        "A": {"re": [[0, 0], [0, 0]], "im": [[0, 0.3], [-0.3, 0]]},
        "B": [1, -1]
    })");
    CHECK(input.A(0, 1) == Complex(0.0, 0.3));
    CHECK(input.c_diagonal.cwiseAbs().maxCoeff() == 0.0);
    CHECK(input.omega == 0.0);

    // non-Hermitian imaginary part
    CHECK_THROWS(parse_custom_model(R"({
        "A": {"re": [[0, 0], [0, 0]], "im": [[0, 0.3], [0.3, 0]]},
        "B": [1, -1]
    })"));
    // missing B
    CHECK_THROWS(parse_custom_model(R"({"A": [[0, 1], [1, 0]]})"));
    // C dimension mismatch
    CHECK_THROWS(parse_custom_model(R"({
        "A": [[0, 1], [1, 0]], "B": [1, -1], "C": [0, 0, 1]
    })"));
    // ragged matrix
    CHECK_THROWS(parse_custom_model(R"({"A": [[0, 1], [1]], "B": [1, -1]})"));
}

TEST_CASE("sweep config: parsing with grid strings and value arrays") {
    const SweepConfig config = parse_sweep_config(R"({
        "model": "bow_tie",
        "couplings": ["c_0_1", "c_1_3"],
        "delta_grid": "log:0.05:1.5:4",
        "g_grid": [0, 4],
        "omega": 1.1,
        "n_fock": 30,
        "rel_tol": 1e-7,
        "vt_extent": 80,
        "workers": 3,
        "out": "result.csv"
    })");
    CHECK(config.model_kind == ModelKind::BowTie);
    REQUIRE(config.couplings.size() == 2);
    CHECK(config.couplings[1] == CouplingKind::C13);
    REQUIRE(config.delta_grid.size() == 4);
    CHECK(config.delta_grid.front() == doctest::Approx(0.05));
    CHECK(config.delta_grid.back() == doctest::Approx(1.5));
    REQUIRE(config.g_grid.size() == 2);
    CHECK(config.omega_over_delta == 1.1);
    CHECK(config.n_fock == 30);
    CHECK(config.rel_tol == 1e-7);
    CHECK(config.vt_extent == 80.0);
    CHECK(config.workers == 3);
    CHECK(config.output_path == "result.csv");

    // absent keys keep defaults
    const SweepConfig defaults = parse_sweep_config(R"({"model": "triangle"})");
    CHECK(defaults.n_fock == 50);
    CHECK(defaults.omega_over_delta == 1.2);
    CHECK(defaults.delta_grid.empty());
}

TEST_CASE("file round trip through a temp path") {
    const std::string path = "lzsim_test_model.json";
    {
        std::ofstream out(path);
        out << R"({"A": [[0, 1], [1, 0]], "B": [1, -1], "C": [0, 1]})";
    }
    const auto input = load_custom_model_file(path);
    CHECK(input.b_pattern.size() == 2);
    std::remove(path.c_str());

    CHECK_THROWS(load_custom_model_file("does_not_exist.json"));
}
