#include <benchmark/benchmark.h>

#include "lzsim/model.hpp"
#include "lzsim/propagator.hpp"

#include <random>

namespace {

using namespace lzsim;

CompositeHamiltonian production_hamiltonian(int n_fock) {
    const double delta = 1.0;
    const double v = 1.0 / (4.0 * delta);
    return CompositeHamiltonian(build_model(ModelKind::BowTie, 1.0, v),
                                build_coupling(CouplingKind::C13, 4.0),
                                OscillatorSpec{1.2, n_fock});
}

Vector random_vector(int dim) {
    std::mt19937 rng(1234);
    std::normal_distribution<double> dist;
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Complex(dist(rng), dist(rng));
    v.normalize();
    return v;
}

void BM_HamiltonianApply(benchmark::State& state) {
    const CompositeHamiltonian h = production_hamiltonian(static_cast<int>(state.range(0)));
    const Vector x = random_vector(h.dim());
    Vector y(h.dim());
    double t = -100.0;
    for (auto _ : state) {
        h.apply(t, x, y);
        benchmark::DoNotOptimize(y.data());
        t += 1e-6;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HamiltonianApply)->Arg(50)->Arg(70);

void BM_DenseAssembly(benchmark::State& state) {
    const CompositeHamiltonian h = production_hamiltonian(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Matrix m = h.at(0.0);
        benchmark::DoNotOptimize(m.data());
    }
}
BENCHMARK(BM_DenseAssembly)->Arg(50);

void BM_GroundState(benchmark::State& state) {
    const CompositeHamiltonian h = production_hamiltonian(50);
    for (auto _ : state) {
        StateVector gs = ground_state(h, -400.0);
        benchmark::DoNotOptimize(gs.amplitudes().data());
    }
}
BENCHMARK(BM_GroundState);

void BM_EvolveShortWindow(benchmark::State& state) {
    const CompositeHamiltonian h = production_hamiltonian(50);
    EvolutionConfig config = default_config(h.model(), 2.0);
    config.rel_tol = 1e-8;
    const StateVector psi0 = ground_state(h, config.t_start);
    for (auto _ : state) {
        EvolutionResult res = evolve(h, psi0, config);
        benchmark::DoNotOptimize(res.final_state.amplitudes().data());
    }
}
BENCHMARK(BM_EvolveShortWindow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
