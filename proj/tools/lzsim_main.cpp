// lzsim — multilevel Landau-Zener sweeps with a harmonic-oscillator
// environment. Subcommands: sweep, point, audit, oracle.

#include <CLI11.hpp>

#include "lzsim/analysis.hpp"
#include "lzsim/model_io.hpp"
#include "lzsim/propagator.hpp"
#include "lzsim/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lzsim;

struct CommonOptions {
    std::string config_file;
    std::string model = "equal_slope";
    std::vector<std::string> couplings;
    std::string delta_grid;
    std::string g_grid;
    double omega = 1.2;
    int n_fock = 50;
    double tol = 1e-8;
    double tspan = 100.0;
    double leak_threshold = 1e-6;
    int workers = 0;
    std::string out;
    std::string custom_file;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_file,
                    "JSON config file; explicit flags override its values");
    cmd->add_option("--model", opt.model,
                    "equal_slope | bow_tie | triangle | two_level | custom");
    cmd->add_option("--coupling", opt.couplings,
                    "c_1_3 | c_3_1 | c_1_1 | c_0_1 | c_1_0 (repeatable)");
    cmd->add_option("--delta-grid", opt.delta_grid,
                    "lin:lo:hi:n, log:lo:hi:n, or comma list");
    cmd->add_option("--g-grid", opt.g_grid, "same grammar as --delta-grid");
    cmd->add_option("--omega", opt.omega, "oscillator quantum in gap units");
    cmd->add_option("--nfock", opt.n_fock, "retained Fock states");
    cmd->add_option("--tol", opt.tol, "integrator relative tolerance");
    cmd->add_option("--tspan", opt.tspan, "evolve over v t in [-X, +X] gap units");
    cmd->add_option("--leak-threshold", opt.leak_threshold,
                    "top-two-Fock-level population flagged above this");
    cmd->add_option("--workers", opt.workers, "worker threads (0 = all cores)");
    cmd->add_option("--out", opt.out, "output CSV path (default stdout)");
    cmd->add_option("--custom-file", opt.custom_file,
                    "JSON custom model (implies --model custom)");
}

SweepConfig resolve_config(const CLI::App* cmd, const CommonOptions& opt) {
    SweepConfig config;
    if (!opt.config_file.empty()) {
        config = load_sweep_config(opt.config_file);
    }
    const auto passed = [&](const std::string& flag) {
        return cmd->count(flag) > 0;
    };
    if (passed("--model")) config.model_kind = model_kind_from_string(opt.model);
    if (passed("--coupling")) {
        config.couplings.clear();
        for (const auto& name : opt.couplings) {
            config.couplings.push_back(coupling_kind_from_string(name));
        }
    }
    if (passed("--delta-grid")) config.delta_grid = parse_grid(opt.delta_grid);
    if (passed("--g-grid")) config.g_grid = parse_grid(opt.g_grid);
    if (passed("--omega")) config.omega_over_delta = opt.omega;
    if (passed("--nfock")) config.n_fock = opt.n_fock;
    if (passed("--tol")) config.rel_tol = opt.tol;
    if (passed("--tspan")) config.vt_extent = opt.tspan;
    if (passed("--leak-threshold")) config.leak_threshold = opt.leak_threshold;
    if (passed("--workers")) config.workers = opt.workers;
    if (passed("--out")) config.output_path = opt.out;
    if (passed("--custom-file")) {
        config.custom = load_custom_model_file(opt.custom_file);
        config.model_kind = ModelKind::Custom;
    }

    if (config.delta_grid.empty()) config.delta_grid = default_delta_grid();
    if (config.g_grid.empty()) config.g_grid = default_g_grid();
    if (config.couplings.empty()) config.couplings = {CouplingKind::C13};
    return config;
}

void emit_csv(const SweepResult& result, const std::string& out_path) {
    if (out_path.empty()) {
        write_csv(result, std::cout);
    } else {
        write_csv(result, out_path);
        std::cerr << "wrote " << result.rows.size() << " rows to " << out_path
                  << "\n";
    }
}

int cmd_sweep(const CLI::App* cmd, const CommonOptions& opt) {
    SweepConfig config = resolve_config(cmd, opt);
    const std::string out_path = config.output_path;
    config.output_path.clear();  // emit below so stdout works too
    const SweepResult result = run_sweep(config);
    emit_csv(result, out_path);

    int failed = 0;
    for (const auto& row : result.rows) {
        if (!row.ok()) ++failed;
    }
    if (failed > 0) {
        std::cerr << failed << " of " << result.rows.size()
                  << " points failed; see status column\n";
        return 1;
    }
    return 0;
}

int cmd_point(const CLI::App* cmd, const CommonOptions& opt, double delta,
              double g, const std::string& trajectory_path, int trajectory_samples,
              bool eigen_readout) {
    SweepConfig config = resolve_config(cmd, opt);

    if (!trajectory_path.empty() || eigen_readout) {
        // Re-run the pipeline by hand to expose the trajectory and the
        // eigenbasis-readout diagnostic for this single point.
        const double v = 1.0 / (4.0 * delta);
        ModelSpec model;
        CouplingSpec coupling;
        if (config.custom) {
            model.kind = ModelKind::Custom;
            model.A = config.custom->A;
            model.b_diag = v * config.custom->b_pattern;
            model.delta_gap = 1.0;
            model.sweep_rate = v;
            coupling = build_custom_coupling(config.custom->c_diagonal, g);
        } else {
            model = build_model(config.model_kind, 1.0, v);
            if (model.dim() == 3) {
                coupling = build_coupling(config.couplings.front(), g);
            } else {
                const CouplingSpec full =
                    build_coupling(config.couplings.front(), g, 3);
                coupling =
                    build_custom_coupling(full.diagonal.head(model.dim()), g);
            }
        }
        OscillatorSpec osc{config.omega_over_delta, config.n_fock};
        const CompositeHamiltonian h(model, coupling, osc);
        EvolutionConfig evo = default_config(model, config.vt_extent);
        evo.rel_tol = config.rel_tol;
        const int samples = std::max(trajectory_samples, 2);
        if (!trajectory_path.empty()) {
            for (int i = 0; i < samples; ++i) {
                evo.sample_times.push_back(
                    evo.t_start + (evo.t_end - evo.t_start) * i / (samples - 1));
            }
        }
        const StateVector psi0 = ground_state(h, evo.t_start);
        const EvolutionResult res = evolve(h, psi0, evo);
        if (!trajectory_path.empty()) {
            std::ofstream traj_out(trajectory_path);
            if (!traj_out) {
                std::cerr << "cannot open " << trajectory_path << "\n";
                return 1;
            }
            write_trajectory_csv(h, res.trajectory, traj_out);
        }
        if (eigen_readout) {
            const auto bare =
                system_populations(res.final_state, model.dim(), osc.n_fock);
            const auto eig = eigenbasis_populations(h, evo.t_end, res.final_state);
            std::cout << "readout comparison (bare vs eigenbasis):\n";
            for (int i = 0; i < model.dim(); ++i) {
                std::printf("  P%d  %.8f  %.8f\n", i + 1, bare.p[i], eig.p[i]);
            }
        }
    }

    SweepResult result;
    result.rows.push_back(run_point(config, delta, g));
    emit_csv(result, config.output_path);
    return result.rows[0].ok() ? 0 : 1;
}

int cmd_audit(const CLI::App* cmd, const CommonOptions& opt,
              const std::vector<std::string>& samples) {
    SweepConfig config = resolve_config(cmd, opt);
    std::vector<std::pair<double, double>> points;
    for (const auto& s : samples) {
        double delta = 0.0, g = 0.0;
        if (std::sscanf(s.c_str(), "%lf:%lf", &delta, &g) != 2) {
            std::cerr << "bad sample '" << s << "', expected delta:g\n";
            return 1;
        }
        points.emplace_back(delta, g);
    }
    const AuditReport report = convergence_audit(config, points);
    std::cout << "delta,g,max_probability_change\n";
    for (const auto& row : report.rows) {
        std::printf("%.12g,%.12g,%.3e\n", row.delta, row.g, row.max_change);
    }
    std::cerr << "max change over " << report.rows.size() << " samples: "
              << report.max_change << "\n";
    return 0;
}

int cmd_oracle(const std::string& grid_text) {
    const auto grid = parse_grid(grid_text);
    std::cout << "delta,lz,bowtie_p1,bowtie_p2,bowtie_p3,"
                 "triangle_p1,triangle_p2,triangle_p3\n";
    for (double delta : grid) {
        const auto bt = bowtie_strong_decoherence(delta);
        const auto tr = triangle_incoherent(delta);
        std::printf("%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", delta,
                    lz_probability(delta), bt.p[0], bt.p[1], bt.p[2], tr.p[0],
                    tr.p[1], tr.p[2]);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilevel Landau-Zener sweeps coupled to an oscillator"};
    app.require_subcommand(1);

    CommonOptions sweep_opt;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a (delta, g) grid");
    add_common_flags(sweep_cmd, sweep_opt);

    CommonOptions point_opt;
    double delta = 0.2, g = 0.0;
    std::string trajectory_path;
    int trajectory_samples = 201;
    bool eigen_readout = false;
    auto* point_cmd = app.add_subcommand("point", "run a single (delta, g) point");
    add_common_flags(point_cmd, point_opt);
    point_cmd->add_option("--delta", delta, "adiabaticity parameter")->required();
    point_cmd->add_option("--g", g, "coupling strength in gap units");
    point_cmd->add_option("--trajectory", trajectory_path,
                          "write time-resolved populations to this CSV");
    point_cmd->add_option("--trajectory-samples", trajectory_samples,
                          "trajectory sample count");
    point_cmd->add_flag("--eigen-readout", eigen_readout,
                        "also print eigenbasis-classified populations");

    CommonOptions audit_opt;
    std::vector<std::string> samples;
    auto* audit_cmd =
        app.add_subcommand("audit", "convergence audit at sample points");
    add_common_flags(audit_cmd, audit_opt);
    audit_cmd->add_option("--samples", samples, "delta:g pairs (repeatable)")
        ->required();

    std::string oracle_grid = "log:0.01:3:24";
    auto* oracle_cmd =
        app.add_subcommand("oracle", "print the closed-form transition curves");
    oracle_cmd->add_option("--delta-grid", oracle_grid,
                           "lin:lo:hi:n, log:lo:hi:n, or comma list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_cmd, sweep_opt);
        if (point_cmd->parsed()) {
            return cmd_point(point_cmd, point_opt, delta, g, trajectory_path,
                             trajectory_samples, eigen_readout);
        }
        if (audit_cmd->parsed()) return cmd_audit(audit_cmd, audit_opt, samples);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_grid);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
