// model.hpp — Operators for multilevel Landau-Zener problems coupled to a
// harmonic-oscillator environment: named system models, diagonal coupling
// operators, the asymptotic-shift correction, and the assembled composite
// Hamiltonian on the truncated product space.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <string_view>
#include <utility>

namespace lzsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// System models
// ---------------------------------------------------------------------------

enum class ModelKind { EqualSlope, BowTie, Triangle, TwoLevel, Custom };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

// A linear-sweep problem H_S(t) = A + B t. A is Hermitian, B is real diagonal
// (stored as its diagonal). delta_gap and sweep_rate are the overall scales of
// A and B; time is measured in units where hbar = 1.
struct ModelSpec {
    ModelKind kind = ModelKind::Custom;
    Matrix A;
    RealVector b_diag;
    double delta_gap = 1.0;
    double sweep_rate = 1.0;

    int dim() const { return static_cast<int>(b_diag.size()); }
};

// Named models. Unit convention: state 1 is the diabatic state that is lowest
// in energy at the initial time (its B eigenvalue is positive), so a sweep
// started in the ground state starts in state 1.
ModelSpec build_model(ModelKind kind, double delta_gap, double sweep_rate);

// Arbitrary model from explicit matrices. A must be Hermitian within 1e-12,
// B real diagonal within 1e-12, dimensions equal. Scales are recorded as 1.
ModelSpec build_custom_model(const Matrix& A, const Matrix& B);

// ---------------------------------------------------------------------------
// System-environment coupling
// ---------------------------------------------------------------------------

enum class CouplingKind { C13, C31, C11, C01, C10, CustomDiagonal };

std::string_view to_string(CouplingKind kind);
CouplingKind coupling_kind_from_string(std::string_view name);

// Diagonal coupling operator C = g * diag(coefficients). Element (1,1) is zero
// for all named kinds, so the initially occupied state is never displaced.
struct CouplingSpec {
    CouplingKind kind = CouplingKind::CustomDiagonal;
    double g = 0.0;
    RealVector diagonal;  // coefficients multiplying g

    int dim() const { return static_cast<int>(diagonal.size()); }
    RealVector values() const { return g * diagonal; }
};

// Named kinds are defined for three-level systems only.
CouplingSpec build_coupling(CouplingKind kind, double g, int dimension = 3);
CouplingSpec build_custom_coupling(const RealVector& diagonal, double g);

// ---------------------------------------------------------------------------
// Oscillator environment
// ---------------------------------------------------------------------------

struct OscillatorSpec {
    double omega = 1.2;  // hbar*omega, energy
    int n_fock = 50;     // retained Fock states
};

void validate(const OscillatorSpec& osc);

// A_tilde = A + sum_i |b_i> (<b_i|C|b_i>^2 / omega) <b_i|. Cancels the
// coupling-induced asymptotic shift of each diabatic level. C is diagonal in
// the computational basis, which is also the eigenbasis of B, so the
// correction is evaluated elementwise on the diagonal.
Matrix shift_corrected_A(const ModelSpec& model, const CouplingSpec& coupling,
                         double omega);

// ---------------------------------------------------------------------------
// Composite Hamiltonian
// ---------------------------------------------------------------------------

// Product-basis index of |i, n> (system state i, Fock state n), system major.
inline int basis_index(int system_state, int fock_n, int n_fock) {
    return system_state * n_fock + fock_n;
}

// H(t) = A_tilde (x) I  +  (B (x) I) t  +  I (x) omega a'a  +  C (x) (a + a')
// on the truncated space of dim() = d * n_fock states. Immutable after
// construction; evaluation is const and thread-safe.
class CompositeHamiltonian {
public:
    CompositeHamiltonian(ModelSpec model, CouplingSpec coupling,
                         OscillatorSpec oscillator);

    int dim() const { return static_cast<int>(diag0_.size()); }
    int system_dim() const { return model_.dim(); }
    int fock_dim() const { return oscillator_.n_fock; }

    const ModelSpec& model() const { return model_; }
    const CouplingSpec& coupling() const { return coupling_; }
    const OscillatorSpec& oscillator() const { return oscillator_; }
    const Matrix& a_tilde() const { return a_tilde_; }

    // Dense H(t).
    Matrix at(double t) const;

    // y = H(t) x without assembling the dense matrix. The sweep term enters
    // as a diagonal update, the coupling as first-off-diagonal ladder terms.
    void apply(double t, const Vector& x, Vector& y) const;

    // Gershgorin bounds on the spectrum of H(t), used by propagators.
    std::pair<double, double> spectral_interval(double t) const;
    double spectral_bound(double t) const;

    // Bounds on local commutator structure: ||[A_tilde, B]||_2, constant in t.
    double commutator_norm() const { return comm_norm_; }

private:
    ModelSpec model_;
    CouplingSpec coupling_;
    OscillatorSpec oscillator_;
    Matrix a_tilde_;        // d x d
    RealVector cvals_;      // d, diagonal of C
    RealVector diag0_;      // N, static diagonal: A_tilde_ii + omega*n
    RealVector bfull_;      // N, sweep diagonal: b_i
    RealVector ladder_;     // n_fock-1, sqrt(n+1)
    double offdiag_row_bound_ = 0.0;
    double comm_norm_ = 0.0;
};

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

// Normalized amplitude vector over the product basis |i, n>, system major.
class StateVector {
public:
    // Validates Euclidean norm 1 within 1e-9.
    explicit StateVector(Vector amplitudes);

    // Wraps amplitudes without the norm check. Used for propagation results,
    // which carry the integrator's norm drift instead of being renormalized.
    static StateVector raw(Vector amplitudes);

    const Vector& amplitudes() const { return amps_; }
    double norm() const { return amps_.norm(); }
    int size() const { return static_cast<int>(amps_.size()); }

private:
    struct RawTag {};
    StateVector(Vector amplitudes, RawTag) : amps_(std::move(amplitudes)) {}
    Vector amps_;
};

// Lowest eigenvector of H(t), phase fixed by making the largest-magnitude
// amplitude real positive. Throws if the lowest pair is closer than
// 1e-8 * delta_gap (an ambiguous ground state is an error, not a choice).
StateVector ground_state(const CompositeHamiltonian& h, double t);

}  // namespace lzsim
