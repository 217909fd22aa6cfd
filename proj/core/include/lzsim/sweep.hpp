// sweep.hpp — Configuration-driven experiment runner over (delta, g) grids,
// with deterministic parallel execution, CSV persistence and convergence
// audits.
//
// Unit convention: delta_gap = 1 fixes the energy unit, hbar = 1, and the
// sweep rate is derived from the adiabaticity parameter, v = 1 / (4 delta).
// g and omega are quoted in units of the gap.

#pragma once

#include "lzsim/model.hpp"
#include "lzsim/propagator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lzsim {

// Custom problem loaded from file: A in gap units, the slope pattern of B
// (scaled by the derived sweep rate), and the coupling coefficients that g
// multiplies. omega/n_fock are optional per-file overrides (0 = unset).
struct CustomModelInput {
    Matrix A;
    RealVector b_pattern;
    RealVector c_diagonal;
    double omega = 0.0;
    int n_fock = 0;
};

struct SweepConfig {
    ModelKind model_kind = ModelKind::EqualSlope;
    std::optional<CustomModelInput> custom;
    std::vector<CouplingKind> couplings;
    std::vector<double> delta_grid;
    std::vector<double> g_grid;
    double omega_over_delta = 1.2;
    int n_fock = 50;
    double rel_tol = 1e-8;
    double vt_extent = 100.0;     // evolve over v t in [-extent, +extent]
    double leak_threshold = 1e-6;
    std::string output_path;
    int workers = 0;              // 0: hardware concurrency
};

// Grid defaults covering the features of the final-probability maps.
std::vector<double> default_delta_grid();  // 24 points, log over [1e-2, 3]
std::vector<double> default_g_grid();      // 17 points, linear over [0, 4]

// "lin:lo:hi:n", "log:lo:hi:n", or a comma-separated list of values.
std::vector<double> parse_grid(const std::string& text);

struct SweepRow {
    std::string model;
    std::string coupling;
    double delta = 0.0;
    double g_over_delta = 0.0;
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    double norm_drift = 0.0;
    double leakage = 0.0;
    long steps = 0;
    double wall_ms = 0.0;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

// Full pipeline for one grid point: build operators (with the shift-corrected
// static part), prepare the ground state at v t = -extent, evolve to
// +extent, read out populations and diagnostics. Integrator and leakage
// failures are captured in the row status together with the offending point.
SweepRow run_point(const SweepConfig& config, CouplingKind coupling,
                   double delta, double g);

// Single-coupling convenience: uses the first configured coupling.
SweepRow run_point(const SweepConfig& config, double delta, double g);

// Executes the full couplings x delta x g grid on a bounded worker pool.
// Row order is coupling-major, then delta, then g, independent of the worker
// count. Failed points are recorded per-row and do not abort the sweep.
SweepResult run_sweep(const SweepConfig& config);

// Re-runs sample points with n_fock + 20 and rel_tol / 10 and reports the
// largest change in any occupation probability.
struct AuditRow {
    double delta = 0.0;
    double g = 0.0;
    double max_change = 0.0;
};

struct AuditReport {
    std::vector<AuditRow> rows;
    double max_change = 0.0;
};

AuditReport convergence_audit(const SweepConfig& config,
                              const std::vector<std::pair<double, double>>& sample);

inline constexpr const char* kSweepCsvHeader =
    "model,coupling,delta,g_over_delta,p1,p2,p3,norm_drift,leakage,steps,"
    "wall_ms,status";

void write_csv(const SweepResult& result, std::ostream& out);
void write_csv(const SweepResult& result, const std::string& path);

// Time-resolved dump of a sampled trajectory: t, P_1..P_3, <n> per row.
void write_trajectory_csv(const CompositeHamiltonian& h,
                          const std::vector<std::pair<double, StateVector>>& traj,
                          std::ostream& out);

}  // namespace lzsim
