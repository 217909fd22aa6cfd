#include <doctest.h>

#include "lzsim/analysis.hpp"
#include "lzsim/sweep.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace lzsim;

namespace {

// Strips the wall-clock column (the one timing field is measurement noise;
// everything else must be bit-identical across schedules).
std::string without_wall_ms(const SweepResult& result) {
    SweepResult masked = result;
    for (auto& row : masked.rows) row.wall_ms = 0.0;
    std::ostringstream out;
    write_csv(masked, out);
    return out.str();
}

}  // namespace

TEST_CASE("grids: defaults and parser") {
    const auto dg = default_delta_grid();
    REQUIRE(dg.size() == 24);
    CHECK(dg.front() == doctest::Approx(1e-2));
    CHECK(dg.back() == doctest::Approx(3.0));

    const auto gg = default_g_grid();
    REQUIRE(gg.size() == 17);
    CHECK(gg.front() == 0.0);
    CHECK(gg.back() == 4.0);

    const auto lin = parse_grid("lin:0:2:5");
    REQUIRE(lin.size() == 5);
    CHECK(lin[1] == doctest::Approx(0.5));

    const auto lg = parse_grid("log:0.01:1:3");
    REQUIRE(lg.size() == 3);
    CHECK(lg[1] == doctest::Approx(0.1));

    const auto list = parse_grid("0.3,1.5,2");
    REQUIRE(list.size() == 3);
    CHECK(list[2] == 2.0);

    CHECK_THROWS_AS(parse_grid("lin:0:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("log:-1:1:4"), std::invalid_argument);
}

TEST_CASE("run_point: two-level closed system reproduces the sweep formula") {
    SweepConfig config;
    config.model_kind = ModelKind::TwoLevel;
    config.couplings = {CouplingKind::C13};  // restricted to two levels
    config.n_fock = 4;
    const SweepRow row = run_point(config, 0.2, 0.0);
    REQUIRE(row.ok());
    CHECK(std::abs(row.p1 - std::exp(-0.4 * std::numbers::pi)) < 1e-3);
    CHECK(row.p3 == 0.0);
    CHECK(row.p1 + row.p2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(row.norm_drift < 1e-6);
    CHECK(row.steps > 0);
}

TEST_CASE("run_point: equal slope with c_0_1 is insensitive to g") {
    SweepConfig config;
    config.model_kind = ModelKind::EqualSlope;
    config.couplings = {CouplingKind::C01};
    config.n_fock = 32;
    config.leak_threshold = 1e-4;
    const SweepRow base = run_point(config, 0.2, 0.0);
    const SweepRow coupled = run_point(config, 0.2, 2.0);
    REQUIRE(base.ok());
    REQUIRE(coupled.ok());
    CHECK(std::abs(base.p1 - coupled.p1) < 1e-3);
    CHECK(std::abs(base.p2 - coupled.p2) < 1e-3);
    CHECK(std::abs(base.p3 - coupled.p3) < 1e-3);
}

TEST_CASE("run_point: bow-tie strong-decoherence point matches the product law") {
    SweepConfig config;
    config.model_kind = ModelKind::BowTie;
    config.couplings = {CouplingKind::C01};
    config.n_fock = 50;
    // The displaced cascade parks real population near the truncation edge
    // at g = 4; the 50 -> 70 audit bounds the probability distortion.
    config.leak_threshold = 0.02;
    const SweepRow row = run_point(config, 0.3, 4.0);
    REQUIRE(row.ok());
    const auto expected = bowtie_strong_decoherence(0.3);
    CHECK(std::abs(row.p1 - expected.p[0]) < 0.02);
    CHECK(std::abs(row.p2 - expected.p[1]) < 0.02);
    CHECK(std::abs(row.p3 - expected.p[2]) < 0.02);
}

TEST_CASE("run_point: equal slope with c_1_1 pulls P2 and P3 together as g grows") {
    SweepConfig config;
    config.model_kind = ModelKind::EqualSlope;
    config.couplings = {CouplingKind::C11};
    config.n_fock = 50;
    config.leak_threshold = 0.02;
    config.workers = 2;
    config.delta_grid = {0.3};
    config.g_grid = {0.0, 1.0, 2.0, 4.0};
    const SweepResult result = run_sweep(config);
    REQUIRE(result.rows.size() == 4);
    double prev = 2.0;
    for (const auto& row : result.rows) {
        REQUIRE(row.ok());
        const double split = std::abs(row.p2 - row.p3);
        CHECK(split <= prev + 1e-3);  // non-increasing within noise
        prev = split;
    }
    CHECK(prev < std::abs(result.rows[0].p2 - result.rows[0].p3));
}

TEST_CASE("run_point: failures are captured in the row status") {
    SweepConfig config;
    config.model_kind = ModelKind::TwoLevel;
    config.couplings = {CouplingKind::C11};
    config.n_fock = 4;
    config.rel_tol = 1e-300;  // unreachable: step underflow
    const SweepRow row = run_point(config, 0.2, 0.0);
    CHECK_FALSE(row.ok());
    CHECK(row.status.find("delta=0.2") != std::string::npos);
    CHECK(std::isnan(row.p1));
}

TEST_CASE("run_sweep: degenerate grid equals run_point, deterministic workers") {
    SweepConfig config;
    config.model_kind = ModelKind::TwoLevel;
    config.couplings = {CouplingKind::C11};
    config.n_fock = 4;
    config.delta_grid = {0.3};
    config.g_grid = {0.5};

    const SweepRow single = run_point(config, 0.3, 0.5);
    SweepResult ref;

    for (int workers : {1, 2, 5}) {
        config.workers = workers;
        const SweepResult result = run_sweep(config);
        REQUIRE(result.rows.size() == 1);
        CHECK(result.rows[0].p1 == single.p1);
        CHECK(result.rows[0].p2 == single.p2);
        CHECK(result.rows[0].steps == single.steps);
        if (workers == 1) {
            ref = result;
        } else {
            CHECK(without_wall_ms(result) == without_wall_ms(ref));
        }
    }
}

TEST_CASE("run_sweep: row order is coupling-major, then delta, then g") {
    SweepConfig config;
    config.model_kind = ModelKind::TwoLevel;
    config.couplings = {CouplingKind::C01, CouplingKind::C10};
    config.n_fock = 2;
    config.delta_grid = {0.4, 0.1};
    config.g_grid = {0.0, 1.0};
    config.workers = 2;
    config.vt_extent = 10.0;  // short run, ordering is what matters here

    const SweepResult result = run_sweep(config);
    REQUIRE(result.rows.size() == 8);
    CHECK(result.rows[0].coupling == "c_0_1");
    CHECK(result.rows[4].coupling == "c_1_0");
    CHECK(result.rows[0].delta == 0.4);
    CHECK(result.rows[2].delta == 0.1);
    CHECK(result.rows[0].g_over_delta == 0.0);
    CHECK(result.rows[1].g_over_delta == 1.0);
}

TEST_CASE("run_sweep: validates grids") {
    SweepConfig config;
    config.model_kind = ModelKind::TwoLevel;
    config.couplings = {CouplingKind::C11};
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);

    config.delta_grid = {0.0};
    config.g_grid = {0.0};
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);

    config.delta_grid = {0.1};
    config.g_grid = {-1.0};
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);
}

TEST_CASE("csv: header and formatting") {
    SweepResult result;
    SweepRow row;
    row.model = "bow_tie";
    row.coupling = "c_0_1";
    row.delta = 0.25;
    row.g_over_delta = 1.5;
    row.p1 = 0.125;
    row.p2 = 0.5;
    row.p3 = 0.375;
    row.norm_drift = 1e-9;
    row.leakage = 1e-12;
    row.steps = 1234;
    row.wall_ms = 17.25;
    result.rows.push_back(row);

    std::ostringstream out;
    write_csv(result, out);
    const std::string text = out.str();
    CHECK(text.find("model,coupling,delta,g_over_delta,p1,p2,p3,norm_drift,"
                    "leakage,steps,wall_ms,status\n") == 0);
    CHECK(text.find("bow_tie,c_0_1,0.25,1.5,0.125,0.5,0.375,1e-09,1e-12,1234,"
                    "17.25,ok\n") != std::string::npos);
}

TEST_CASE("convergence_audit: empty sample and inert-oscillator point") {
    SweepConfig config;
    config.model_kind = ModelKind::TwoLevel;
    config.couplings = {CouplingKind::C11};
    config.n_fock = 6;

    const AuditReport empty = convergence_audit(config, {});
    CHECK(empty.rows.empty());
    CHECK(empty.max_change == 0.0);

    // g = 0: the oscillator is inert, so extra Fock states change nothing and
    // the tolerance refinement is the only remaining knob.
    const AuditReport report = convergence_audit(config, {{0.2, 0.0}});
    REQUIRE(report.rows.size() == 1);
    CHECK(report.max_change < 1e-6);
}
