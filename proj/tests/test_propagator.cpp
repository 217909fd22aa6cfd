#include <doctest.h>

#include "lzsim/analysis.hpp"
#include "lzsim/model.hpp"
#include "lzsim/propagator.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lzsim;

namespace {

StateVector random_state(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Complex(dist(rng), dist(rng));
    v.normalize();
    return StateVector(std::move(v));
}

// Test-local exponential propagation for a time-independent Hamiltonian,
// independent of the library's propagators.
Vector expm_propagate(const Matrix& h, const Vector& psi, double duration) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector coeffs = es.eigenvectors().adjoint() * psi;
    for (int i = 0; i < coeffs.size(); ++i) {
        coeffs[i] *= std::polar(1.0, -es.eigenvalues()(i) * duration);
    }
    return es.eigenvectors() * coeffs;
}

CompositeHamiltonian static_test_hamiltonian() {
    // B = 0 makes H time-independent while keeping all structural terms.
    Matrix a{{0.1, Complex(0.3, 0.2)}, {Complex(0.3, -0.2), -0.4}};
    const ModelSpec m = build_custom_model(a, Matrix::Zero(2, 2));
    const CouplingSpec c = build_custom_coupling(RealVector{{0.0, 0.8}}, 1.0);
    return CompositeHamiltonian(m, c, OscillatorSpec{1.3, 6});
}

}  // namespace

TEST_CASE("bessel coefficient sequence matches the stdlib") {
    std::vector<double> seq;
    for (double z : {1e-6, 0.4, 3.0, 25.0, 120.0, 250.0}) {
        const int kmax = static_cast<int>(z + 40);
        lzsim::detail::bessel_j_sequence(z, kmax, seq);
        REQUIRE(seq.size() == static_cast<std::size_t>(kmax + 1));
        for (int k = 0; k <= kmax; k += std::max(1, kmax / 17)) {
            CHECK(std::abs(seq[k] - std::cyl_bessel_j(k, z)) < 1e-13);
        }
    }
    lzsim::detail::bessel_j_sequence(0.0, 5, seq);
    CHECK(seq[0] == 1.0);
    CHECK(seq[3] == 0.0);
}

TEST_CASE("evolve: null generator returns the initial state") {
    const ModelSpec m = build_custom_model(Matrix::Zero(2, 2), Matrix::Zero(2, 2));
    const CouplingSpec c = build_custom_coupling(RealVector::Zero(2), 0.0);
    const CompositeHamiltonian h(m, c, OscillatorSpec{0.0, 2});
    const StateVector psi0 = random_state(h.dim(), 42);

    EvolutionConfig config;
    config.t_start = -5.0;
    config.t_end = 5.0;
    const EvolutionResult res = evolve(h, psi0, config);
    CHECK((res.final_state.amplitudes() - psi0.amplitudes()).norm() < 1e-13);
    CHECK(res.norm_drift < 1e-14);
}

TEST_CASE("evolve: matches matrix exponential for a static Hamiltonian") {
    const CompositeHamiltonian h = static_test_hamiltonian();
    const StateVector psi0 = random_state(h.dim(), 3);

    EvolutionConfig config;
    config.t_start = 0.0;
    config.t_end = 7.0;
    config.rel_tol = 1e-10;
    const EvolutionResult res = evolve(h, psi0, config);

    const Vector expected = expm_propagate(h.at(0.0), psi0.amplitudes(), 7.0);
    CHECK((res.final_state.amplitudes() - expected).norm() < 1e-8);
}

TEST_CASE("evolve: two-level sweep reproduces exp(-2 pi delta)") {
    const double delta = 0.5;
    const double v = 1.0 / (4.0 * delta);
    const ModelSpec m = build_model(ModelKind::TwoLevel, 1.0, v);
    const CouplingSpec c = build_custom_coupling(RealVector{{0.0, 1.0}}, 0.0);
    const CompositeHamiltonian h(m, c, OscillatorSpec{1.2, 4});

    EvolutionConfig config = default_config(m);
    config.rel_tol = 1e-8;
    const StateVector psi0 = ground_state(h, config.t_start);
    const EvolutionResult res = evolve(h, psi0, config);

    // Bare projection carries the finite-time interference wobble of order
    // gap / (2 v t_end); eigenbasis classification removes it.
    const auto bare = system_populations(res.final_state, 2, 4);
    CHECK(std::abs(bare.p[0] - std::exp(-std::numbers::pi)) < 3e-3);
    const auto pops = eigenbasis_populations(h, config.t_end, res.final_state);
    CHECK(std::abs(pops.p[0] - std::exp(-std::numbers::pi)) < 1e-3);
    CHECK(res.norm_drift < 1e-6);
}

TEST_CASE("piecewise oracle: single slice is exact for static H") {
    const CompositeHamiltonian h = static_test_hamiltonian();
    const StateVector psi0 = random_state(h.dim(), 11);
    const StateVector out = evolve_piecewise_oracle(h, psi0, 1, 0.0, 3.0);
    const Vector expected = expm_propagate(h.at(0.0), psi0.amplitudes(), 3.0);
    CHECK((out.amplitudes() - expected).norm() < 1e-13);
}

TEST_CASE("piecewise oracle: unitary to roundoff") {
    const ModelSpec m = build_model(ModelKind::BowTie, 1.0, 1.0);
    const CouplingSpec c = build_coupling(CouplingKind::C01, 2.0);
    const CompositeHamiltonian h(m, c, OscillatorSpec{1.2, 5});
    const StateVector psi0 = random_state(h.dim(), 5);
    const StateVector out = evolve_piecewise_oracle(h, psi0, 57, -3.0, 9.0);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("evolve agrees with the piecewise oracle on a small instance") {
    // d * n_fock = 3 * 10 = 30; window covers the avoided crossings
    const double delta = 0.5;
    const double v = 1.0 / (4.0 * delta);
    const ModelSpec m = build_model(ModelKind::EqualSlope, 1.0, v);
    const CouplingSpec c = build_coupling(CouplingKind::C11, 1.0);
    const CompositeHamiltonian h(m, c, OscillatorSpec{1.2, 10});

    EvolutionConfig config = default_config(m, 4.0);
    config.rel_tol = 1e-10;
    const StateVector psi0 = ground_state(h, config.t_start);
    const EvolutionResult res = evolve(h, psi0, config);

    // Slice counts chosen so the oracle self-converges below the target.
    StateVector coarse =
        evolve_piecewise_oracle(h, psi0, 20000, config.t_start, config.t_end);
    StateVector fine =
        evolve_piecewise_oracle(h, psi0, 40000, config.t_start, config.t_end);
    REQUIRE((coarse.amplitudes() - fine.amplitudes()).norm() < 2e-6);

    CHECK((res.final_state.amplitudes() - fine.amplitudes()).norm() < 1e-6);
}

TEST_CASE("evolve: linearity with normalization bookkeeping") {
    const CompositeHamiltonian h = static_test_hamiltonian();
    const StateVector psi1 = random_state(h.dim(), 21);
    const StateVector psi2 = random_state(h.dim(), 22);
    const Complex alpha(0.6, 0.3), beta(-0.2, 0.7);

    Vector combo = alpha * psi1.amplitudes() + beta * psi2.amplitudes();
    const double combo_norm = combo.norm();
    combo /= combo_norm;

    EvolutionConfig config;
    config.t_start = -2.0;
    config.t_end = 4.0;
    config.rel_tol = 1e-10;

    const Vector out1 = evolve(h, psi1, config).final_state.amplitudes();
    const Vector out2 = evolve(h, psi2, config).final_state.amplitudes();
    const Vector out_combo =
        evolve(h, StateVector(combo), config).final_state.amplitudes();

    const Vector expected = (alpha * out1 + beta * out2) / combo_norm;
    CHECK((out_combo - expected).norm() < 1e-8);
}

TEST_CASE("evolve: zero coupling leaves the oscillator distribution frozen") {
    const double v = 1.0;
    const ModelSpec m = build_model(ModelKind::BowTie, 1.0, v);
    const CouplingSpec c = build_coupling(CouplingKind::C13, 0.0);
    const OscillatorSpec osc{1.2, 6};
    const CompositeHamiltonian h(m, c, osc);

    EvolutionConfig config = default_config(m, 15.0);
    for (int k = 0; k <= 10; ++k) {
        config.sample_times.push_back(config.t_start +
                                      k * (config.t_end - config.t_start) / 10.0);
    }
    const StateVector psi0 = ground_state(h, config.t_start);
    const RealVector q0 = oscillator_populations(psi0, 3, osc.n_fock);

    const EvolutionResult res = evolve(h, psi0, config);
    REQUIRE(res.trajectory.size() == 11);
    for (const auto& [t, psi] : res.trajectory) {
        const RealVector q = oscillator_populations(psi, 3, osc.n_fock);
        CHECK((q - q0).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("evolve: step-halving changes final probabilities below 1e-4") {
    const double delta = 0.4;
    const double v = 1.0 / (4.0 * delta);
    const ModelSpec m = build_model(ModelKind::BowTie, 1.0, v);
    const CouplingSpec c = build_coupling(CouplingKind::C01, 1.5);
    const CompositeHamiltonian h(m, c, OscillatorSpec{1.2, 12});

    EvolutionConfig config = default_config(m);
    config.rel_tol = 1e-8;
    const StateVector psi0 = ground_state(h, config.t_start);
    const auto p_base =
        system_populations(evolve(h, psi0, config).final_state, 3, 12);

    config.rel_tol /= 2.0;
    const auto p_fine =
        system_populations(evolve(h, psi0, config).final_state, 3, 12);

    CHECK((p_base.p - p_fine.p).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("evolve: input validation and failure paths") {
    const CompositeHamiltonian h = static_test_hamiltonian();
    const StateVector psi0 = random_state(h.dim(), 8);

    EvolutionConfig config;
    config.t_start = 1.0;
    config.t_end = 1.0;
    CHECK_THROWS_AS(evolve(h, psi0, config), std::invalid_argument);

    config.t_end = 2.0;
    config.rel_tol = 1e-2;
    CHECK_THROWS_AS(evolve(h, psi0, config), std::invalid_argument);

    config.rel_tol = 1e-8;
    const StateVector wrong_dim = random_state(h.dim() + 1, 9);
    CHECK_THROWS_AS(evolve(h, wrong_dim, config), std::invalid_argument);

    // unreachable tolerance drives the step size to underflow
    config.rel_tol = 1e-300;
    CHECK_THROWS_AS(evolve(h, psi0, config), PropagationError);
}
