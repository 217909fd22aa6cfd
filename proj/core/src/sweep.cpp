#include "lzsim/sweep.hpp"

#include "lzsim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lzsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ModelSpec make_model(const SweepConfig& config, double delta) {
    const double v = 1.0 / (4.0 * delta);  // delta_gap = 1
    if (config.model_kind == ModelKind::Custom) {
        if (!config.custom) {
            throw std::invalid_argument("sweep: custom model requested without input");
        }
        ModelSpec spec;
        spec.kind = ModelKind::Custom;
        spec.A = config.custom->A;
        spec.b_diag = v * config.custom->b_pattern;
        spec.delta_gap = 1.0;
        spec.sweep_rate = v;
        return spec;
    }
    return build_model(config.model_kind, 1.0, v);
}

// Named couplings are three-level operators; a two-level model uses the
// first two diagonal entries.
CouplingSpec make_coupling(const SweepConfig& config, CouplingKind kind,
                           double g, int dim) {
    if (config.custom) {
        return build_custom_coupling(config.custom->c_diagonal, g);
    }
    if (dim == 3) {
        return build_coupling(kind, g, 3);
    }
    const CouplingSpec full = build_coupling(kind, g, 3);
    return build_custom_coupling(full.diagonal.head(dim), g);
}

std::string sanitize_status(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

void append_g(std::string& s, double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    s += buf;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(0..n_tasks-1) on a bounded pool. Task pickup order is arbitrary;
// callers index into preallocated storage, so results are deterministic.
void parallel_for(int n_tasks, int workers, const std::function<void(int)>& fn) {
    workers = std::min(workers, n_tasks);
    if (workers <= 1) {
        for (int i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> default_delta_grid() {
    std::vector<double> grid(24);
    const double lo = std::log(1e-2), hi = std::log(3.0);
    for (int i = 0; i < 24; ++i) {
        grid[i] = std::exp(lo + (hi - lo) * i / 23.0);
    }
    return grid;
}

std::vector<double> default_g_grid() {
    std::vector<double> grid(17);
    for (int i = 0; i < 17; ++i) grid[i] = 4.0 * i / 16.0;
    return grid;
}

std::vector<double> parse_grid(const std::string& text) {
    const auto parse_scheme = [&](const char* prefix) -> std::optional<std::vector<double>> {
        const std::string p = std::string(prefix) + ":";
        if (text.rfind(p, 0) != 0) return std::nullopt;
        double lo = 0.0, hi = 0.0;
        int n = 0;
        if (std::sscanf(text.c_str() + p.size(), "%lf:%lf:%d", &lo, &hi, &n) != 3 ||
            n < 1) {
            throw std::invalid_argument("parse_grid: expected " + p + "lo:hi:n");
        }
        std::vector<double> grid(n);
        if (n == 1) {
            grid[0] = lo;
            return grid;
        }
        const bool log = p[2] == 'g';
        if (log && (lo <= 0.0 || hi <= 0.0)) {
            throw std::invalid_argument("parse_grid: log grid needs positive bounds");
        }
        for (int i = 0; i < n; ++i) {
            const double f = static_cast<double>(i) / (n - 1);
            grid[i] = log ? std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * f)
                          : lo + (hi - lo) * f;
        }
        return grid;
    };
    if (auto g = parse_scheme("lin")) return *g;
    if (auto g = parse_scheme("log")) return *g;

    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        grid.push_back(std::stod(item));
    }
    if (grid.empty()) {
        throw std::invalid_argument("parse_grid: no values in '" + text + "'");
    }
    return grid;
}

SweepRow run_point(const SweepConfig& config, CouplingKind coupling,
                   double delta, double g) {
    SweepRow row;
    row.model = config.custom ? "custom" : std::string(to_string(config.model_kind));
    row.coupling = config.custom ? "custom" : std::string(to_string(coupling));
    row.delta = delta;
    row.g_over_delta = g;
    row.p1 = row.p2 = row.p3 = row.norm_drift = row.leakage = kNaN;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (!(delta > 0.0)) {
            throw std::invalid_argument("run_point: delta must be > 0");
        }
        const ModelSpec model = make_model(config, delta);
        const CouplingSpec cpl = make_coupling(config, coupling, g, model.dim());
        OscillatorSpec osc;
        osc.omega = config.custom && config.custom->omega > 0.0
                        ? config.custom->omega
                        : config.omega_over_delta;
        osc.n_fock = config.custom && config.custom->n_fock > 0
                         ? config.custom->n_fock
                         : config.n_fock;
        const CompositeHamiltonian h(model, cpl, osc);

        EvolutionConfig evo = default_config(model, config.vt_extent);
        evo.rel_tol = config.rel_tol;

        const StateVector psi0 = ground_state(h, evo.t_start);
        const EvolutionResult res = evolve(h, psi0, evo);

        // Classify through the eigenbasis of H(t_end): bare projection keeps
        // an O(gap / (v t_end)) interference wobble that the final-time
        // eigenstates do not.
        const PopulationTriple pops =
            eigenbasis_populations(h, evo.t_end, res.final_state);
        row.p1 = pops.p[0];
        row.p2 = model.dim() > 1 ? pops.p[1] : 0.0;
        row.p3 = model.dim() > 2 ? pops.p[2] : 0.0;
        row.norm_drift = res.norm_drift;
        row.leakage = truncation_leakage(res.final_state, model.dim(), osc.n_fock);
        row.steps = res.steps_taken;
        if (row.leakage > config.leak_threshold) {
            row.status = "leakage above threshold";
        }
    } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << e.what() << " [delta=" << delta << " g=" << g << "]";
        row.status = sanitize_status(msg.str());
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return row;
}

SweepRow run_point(const SweepConfig& config, double delta, double g) {
    if (config.custom) {
        return run_point(config, CouplingKind::CustomDiagonal, delta, g);
    }
    if (config.couplings.empty()) {
        throw std::invalid_argument("run_point: no coupling configured");
    }
    return run_point(config, config.couplings.front(), delta, g);
}

SweepResult run_sweep(const SweepConfig& config) {
    if (config.couplings.empty() && !config.custom) {
        throw std::invalid_argument("run_sweep: no coupling configured");
    }
    if (config.delta_grid.empty() || config.g_grid.empty()) {
        throw std::invalid_argument("run_sweep: grids must be non-empty");
    }
    for (double d : config.delta_grid) {
        if (!(d > 0.0)) throw std::invalid_argument("run_sweep: delta values must be > 0");
    }
    for (double g : config.g_grid) {
        if (g < 0.0) throw std::invalid_argument("run_sweep: g values must be >= 0");
    }

    const std::vector<CouplingKind> couplings =
        config.custom ? std::vector<CouplingKind>{CouplingKind::CustomDiagonal}
                      : config.couplings;

    struct Task {
        CouplingKind coupling;
        double delta;
        double g;
    };
    std::vector<Task> tasks;
    tasks.reserve(couplings.size() * config.delta_grid.size() * config.g_grid.size());
    for (CouplingKind c : couplings) {
        for (double d : config.delta_grid) {
            for (double g : config.g_grid) {
                tasks.push_back({c, d, g});
            }
        }
    }

    SweepResult result;
    result.rows.resize(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), resolve_workers(config.workers),
                 [&](int i) {
                     const Task& t = tasks[i];
                     result.rows[i] = run_point(config, t.coupling, t.delta, t.g);
                 });

    if (!config.output_path.empty()) {
        write_csv(result, config.output_path);
    }
    return result;
}

AuditReport convergence_audit(
    const SweepConfig& config,
    const std::vector<std::pair<double, double>>& sample) {
    if (config.couplings.empty() && !config.custom) {
        throw std::invalid_argument("convergence_audit: no coupling configured");
    }
    SweepConfig refined = config;
    refined.n_fock = config.n_fock + 20;
    refined.rel_tol = config.rel_tol / 10.0;
    if (refined.custom && refined.custom->n_fock > 0) {
        refined.custom->n_fock += 20;
    }

    AuditReport report;
    report.rows.resize(sample.size());
    std::vector<SweepRow> base(sample.size()), fine(sample.size());
    parallel_for(static_cast<int>(2 * sample.size()),
                 resolve_workers(config.workers), [&](int i) {
                     const auto& [delta, g] = sample[i / 2];
                     if (i % 2 == 0) {
                         base[i / 2] = run_point(config, delta, g);
                     } else {
                         fine[i / 2] = run_point(refined, delta, g);
                     }
                 });

    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (!base[i].ok() || !fine[i].ok()) {
            throw std::runtime_error("convergence_audit: sample point failed: " +
                                     (base[i].ok() ? fine[i].status : base[i].status));
        }
        const double change = std::max({std::abs(base[i].p1 - fine[i].p1),
                                        std::abs(base[i].p2 - fine[i].p2),
                                        std::abs(base[i].p3 - fine[i].p3)});
        report.rows[i] = AuditRow{sample[i].first, sample[i].second, change};
        report.max_change = std::max(report.max_change, change);
    }
    return report;
}

void write_csv(const SweepResult& result, std::ostream& out) {
    std::string line;
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& row : result.rows) {
        line.clear();
        line += row.model;
        line += ',';
        line += row.coupling;
        line += ',';
        append_g(line, row.delta);
        line += ',';
        append_g(line, row.g_over_delta);
        line += ',';
        append_g(line, row.p1);
        line += ',';
        append_g(line, row.p2);
        line += ',';
        append_g(line, row.p3);
        line += ',';
        append_g(line, row.norm_drift);
        line += ',';
        append_g(line, row.leakage);
        line += ',';
        line += std::to_string(row.steps);
        line += ',';
        append_g(line, row.wall_ms);
        line += ',';
        line += row.status;
        out << line << '\n';
    }
}

void write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_csv: cannot open " + path);
    }
    write_csv(result, out);
    if (!out.good()) {
        throw std::runtime_error("write_csv: write failed for " + path);
    }
}

void write_trajectory_csv(const CompositeHamiltonian& h,
                          const std::vector<std::pair<double, StateVector>>& traj,
                          std::ostream& out) {
    const int d = h.system_dim();
    const int m = h.fock_dim();
    out << "t,p1,p2,p3,n_mean\n";
    std::string line;
    for (const auto& [t, psi] : traj) {
        const PopulationTriple pops = system_populations(psi, d, m);
        const RealVector q = oscillator_populations(psi, d, m);
        double n_mean = 0.0;
        for (int n = 0; n < m; ++n) n_mean += n * q[n];
        line.clear();
        append_g(line, t);
        line += ',';
        append_g(line, pops.p[0]);
        line += ',';
        append_g(line, d > 1 ? pops.p[1] : 0.0);
        line += ',';
        append_g(line, d > 2 ? pops.p[2] : 0.0);
        line += ',';
        append_g(line, n_mean);
        out << line << '\n';
    }
}

}  // namespace lzsim
