// propagator.hpp — Time-dependent Schrodinger integration i d/dt psi = H(t) psi
// from the initial to the final sweep time with controlled accuracy.

#pragma once

#include "lzsim/model.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace lzsim {

struct EvolutionConfig {
    double t_start = 0.0;
    double t_end = 0.0;
    double rel_tol = 1e-8;              // in (0, 1e-3]
    double max_step = 0.0;              // 0: no cap
    std::vector<double> sample_times;   // optional trajectory sampling
};

// Times such that sweep_rate * |t| = vt_extent * delta_gap at both ends
// (default: v t in [-100 delta, +100 delta]).
EvolutionConfig default_config(const ModelSpec& model, double vt_extent = 100.0);

struct EvolutionResult {
    StateVector final_state;
    double norm_drift = 0.0;  // | ||psi(t_end)|| - 1 |
    long steps_taken = 0;     // accepted steps
    std::vector<std::pair<double, StateVector>> trajectory;
};

// Integrator failure (step-size underflow, runaway norm drift).
struct PropagationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Propagates psi0 from t_start to t_end. The final state is returned as-is,
// with the accumulated norm drift reported, never renormalized. Norm drift
// beyond ten times the 1e-6 acceptance bound aborts the run.
EvolutionResult evolve(const CompositeHamiltonian& h, const StateVector& psi0,
                       const EvolutionConfig& config);

// Independent verification propagator: freezes H(t) at the midpoint of each
// of n_slices uniform slices and applies the exact exponential of the frozen
// matrix (dense eigendecomposition). Unitary to roundoff; converges to the
// true solution as n_slices grows.
StateVector evolve_piecewise_oracle(const CompositeHamiltonian& h,
                                    const StateVector& psi0, int n_slices,
                                    double t_start, double t_end);

namespace detail {
// J_0..J_kmax at z >= 0 (Miller downward recurrence); expansion coefficients
// for the Chebyshev exponential.
void bessel_j_sequence(double z, int kmax, std::vector<double>& out);
}  // namespace detail

}  // namespace lzsim
