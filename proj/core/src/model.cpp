#include "lzsim/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lzsim {

namespace {

constexpr double kHermitianTol = 1e-12;

Matrix symmetrized(const Matrix& A) { return 0.5 * (A + A.adjoint()); }

double max_abs(const Matrix& A) { return A.cwiseAbs().maxCoeff(); }

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::EqualSlope: return "equal_slope";
        case ModelKind::BowTie: return "bow_tie";
        case ModelKind::Triangle: return "triangle";
        case ModelKind::TwoLevel: return "two_level";
        case ModelKind::Custom: return "custom";
    }
    return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
    if (name == "equal_slope") return ModelKind::EqualSlope;
    if (name == "bow_tie") return ModelKind::BowTie;
    if (name == "triangle") return ModelKind::Triangle;
    if (name == "two_level") return ModelKind::TwoLevel;
    if (name == "custom") return ModelKind::Custom;
    throw std::invalid_argument("unknown model kind: " + std::string(name));
}

std::string_view to_string(CouplingKind kind) {
    switch (kind) {
        case CouplingKind::C13: return "c_1_3";
        case CouplingKind::C31: return "c_3_1";
        case CouplingKind::C11: return "c_1_1";
        case CouplingKind::C01: return "c_0_1";
        case CouplingKind::C10: return "c_1_0";
        case CouplingKind::CustomDiagonal: return "custom";
    }
    return "unknown";
}

CouplingKind coupling_kind_from_string(std::string_view name) {
    if (name == "c_1_3") return CouplingKind::C13;
    if (name == "c_3_1") return CouplingKind::C31;
    if (name == "c_1_1") return CouplingKind::C11;
    if (name == "c_0_1") return CouplingKind::C01;
    if (name == "c_1_0") return CouplingKind::C10;
    if (name == "custom") return CouplingKind::CustomDiagonal;
    throw std::invalid_argument("unknown coupling kind: " + std::string(name));
}

ModelSpec build_model(ModelKind kind, double delta_gap, double sweep_rate) {
    if (delta_gap < 0.0) {
        throw std::invalid_argument("build_model: delta_gap must be >= 0");
    }
    if (sweep_rate <= 0.0) {
        throw std::invalid_argument("build_model: sweep_rate must be > 0");
    }

    ModelSpec spec;
    spec.kind = kind;
    spec.delta_gap = delta_gap;
    spec.sweep_rate = sweep_rate;

    const double a = 0.5 * delta_gap;  // A = (delta/2) * (A * 2/delta)
    switch (kind) {
        case ModelKind::EqualSlope:
            spec.A = Matrix{{a * 0.0, a * 1.0, a * 1.0},
                            {a * 1.0, a * 0.0, a * 0.0},
                            {a * 1.0, a * 0.0, a * 1.0}};
            spec.b_diag = sweep_rate * RealVector{{1.0, -1.0, -1.0}};
            break;
        case ModelKind::BowTie:
            spec.A = Matrix{{a * 0.0, a * 1.0, a * 0.0},
                            {a * 1.0, a * 0.0, a * 1.0},
                            {a * 0.0, a * 1.0, a * 0.0}};
            spec.b_diag = sweep_rate * RealVector{{1.0, 0.0, -1.0}};
            break;
        case ModelKind::Triangle:
            spec.A = Matrix{{a * 0.0, a * 1.0, a * 0.8},
                            {a * 1.0, a * -2.0, a * 0.55},
                            {a * 0.8, a * 0.55, a * 0.0}};
            spec.b_diag = sweep_rate * RealVector{{1.0, 0.0, -0.5}};
            break;
        case ModelKind::TwoLevel:
            // -(delta/2) sigma_x with the basis ordered so that state 1 is
            // the low-energy diabatic state at the initial time.
            spec.A = Matrix{{0.0, -a}, {-a, 0.0}};
            spec.b_diag = 0.5 * sweep_rate * RealVector{{1.0, -1.0}};
            break;
        case ModelKind::Custom:
            throw std::invalid_argument(
                "build_model: use build_custom_model for custom matrices");
    }
    return spec;
}

ModelSpec build_custom_model(const Matrix& A, const Matrix& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols()) {
        throw std::invalid_argument("build_custom_model: matrices must be square");
    }
    if (A.rows() != B.rows()) {
        throw std::invalid_argument("build_custom_model: dimension mismatch");
    }
    if (A.rows() < 2 || A.rows() > 3) {
        throw std::invalid_argument("build_custom_model: need 2 or 3 states");
    }
    if (max_abs(A - A.adjoint()) > kHermitianTol) {
        throw std::invalid_argument("build_custom_model: A is not Hermitian");
    }
    Matrix off = B;
    off.diagonal().setZero();
    if (max_abs(off) > kHermitianTol ||
        B.diagonal().imag().cwiseAbs().maxCoeff() > kHermitianTol) {
        throw std::invalid_argument("build_custom_model: B is not real diagonal");
    }

    ModelSpec spec;
    spec.kind = ModelKind::Custom;
    spec.A = symmetrized(A);
    spec.b_diag = B.diagonal().real();
    spec.delta_gap = 1.0;
    spec.sweep_rate = 1.0;
    return spec;
}

CouplingSpec build_coupling(CouplingKind kind, double g, int dimension) {
    if (g < 0.0) {
        throw std::invalid_argument("build_coupling: g must be >= 0");
    }
    if (kind == CouplingKind::CustomDiagonal) {
        throw std::invalid_argument(
            "build_coupling: use build_custom_coupling for custom diagonals");
    }
    if (dimension != 3) {
        throw std::invalid_argument(
            "build_coupling: named couplings are defined for 3-level systems");
    }

    CouplingSpec spec;
    spec.kind = kind;
    spec.g = g;
    switch (kind) {
        case CouplingKind::C13: spec.diagonal = RealVector{{0.0, 1.0 / 3.0, 1.0}}; break;
        case CouplingKind::C31: spec.diagonal = RealVector{{0.0, 1.0, 1.0 / 3.0}}; break;
        case CouplingKind::C11: spec.diagonal = RealVector{{0.0, 1.0, 1.0}}; break;
        case CouplingKind::C01: spec.diagonal = RealVector{{0.0, 0.0, 1.0}}; break;
        case CouplingKind::C10: spec.diagonal = RealVector{{0.0, 1.0, 0.0}}; break;
        case CouplingKind::CustomDiagonal: break;  // unreachable
    }
    return spec;
}

CouplingSpec build_custom_coupling(const RealVector& diagonal, double g) {
    if (g < 0.0) {
        throw std::invalid_argument("build_custom_coupling: g must be >= 0");
    }
    if (diagonal.size() < 2) {
        throw std::invalid_argument("build_custom_coupling: need at least 2 states");
    }
    CouplingSpec spec;
    spec.kind = CouplingKind::CustomDiagonal;
    spec.g = g;
    spec.diagonal = diagonal;
    return spec;
}

void validate(const OscillatorSpec& osc) {
    if (osc.n_fock < 2) {
        throw std::invalid_argument("OscillatorSpec: n_fock must be >= 2");
    }
    if (osc.omega < 0.0) {
        throw std::invalid_argument("OscillatorSpec: omega must be >= 0");
    }
}

Matrix shift_corrected_A(const ModelSpec& model, const CouplingSpec& coupling,
                         double omega) {
    if (omega <= 0.0) {
        throw std::invalid_argument("shift_corrected_A: omega must be > 0");
    }
    if (coupling.dim() != model.dim()) {
        throw std::invalid_argument("shift_corrected_A: dimension mismatch");
    }
    Matrix a_tilde = model.A;
    const RealVector c = coupling.values();
    for (int i = 0; i < model.dim(); ++i) {
        a_tilde(i, i) += c[i] * c[i] / omega;
    }
    return a_tilde;
}

CompositeHamiltonian::CompositeHamiltonian(ModelSpec model, CouplingSpec coupling,
                                           OscillatorSpec oscillator)
    : model_(std::move(model)),
      coupling_(std::move(coupling)),
      oscillator_(oscillator) {
    validate(oscillator_);
    if (coupling_.dim() != model_.dim()) {
        throw std::invalid_argument(
            "CompositeHamiltonian: coupling dimension does not match model");
    }

    cvals_ = coupling_.values();
    const bool coupled = cvals_.cwiseAbs().maxCoeff() > 0.0;
    a_tilde_ = coupled ? shift_corrected_A(model_, coupling_, oscillator_.omega)
                       : model_.A;

    const int d = model_.dim();
    const int m = oscillator_.n_fock;
    diag0_.resize(d * m);
    bfull_.resize(d * m);
    for (int i = 0; i < d; ++i) {
        for (int n = 0; n < m; ++n) {
            const int k = basis_index(i, n, m);
            diag0_[k] = a_tilde_(i, i).real() + oscillator_.omega * n;
            bfull_[k] = model_.b_diag[i];
        }
    }
    ladder_.resize(m - 1);
    for (int n = 0; n + 1 < m; ++n) {
        ladder_[n] = std::sqrt(static_cast<double>(n) + 1.0);
    }

    // Gershgorin row radius, maximized over rows; t-independent.
    double max_row_a = 0.0;
    for (int i = 0; i < d; ++i) {
        double row = 0.0;
        for (int j = 0; j < d; ++j) {
            if (j != i) row += std::abs(a_tilde_(i, j));
        }
        max_row_a = std::max(max_row_a, row);
    }
    const double cmax = cvals_.cwiseAbs().maxCoeff();
    double max_ladder_row = ladder_[m - 2];  // top row has one neighbor
    for (int n = 1; n + 1 < m; ++n) {
        max_ladder_row = std::max(max_ladder_row, ladder_[n - 1] + ladder_[n]);
    }
    offdiag_row_bound_ = max_row_a + cmax * max_ladder_row;

    // ||[A_tilde, B]||_2; the only non-commuting pair in dH/dt vs H.
    Matrix comm(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            comm(i, j) = a_tilde_(i, j) * (model_.b_diag[j] - model_.b_diag[i]);
        }
    }
    comm_norm_ = comm.jacobiSvd().singularValues()(0);
}

Matrix CompositeHamiltonian::at(double t) const {
    const int d = system_dim();
    const int m = fock_dim();
    Matrix h = Matrix::Zero(dim(), dim());
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const Complex a_ij = a_tilde_(i, j);
            if (a_ij == Complex(0.0, 0.0) && i != j) continue;
            for (int n = 0; n < m; ++n) {
                h(basis_index(i, n, m), basis_index(j, n, m)) += a_ij;
            }
        }
        const int base = basis_index(i, 0, m);
        for (int n = 0; n < m; ++n) {
            h(base + n, base + n) += model_.b_diag[i] * t + oscillator_.omega * n;
        }
        const double ci = cvals_[i];
        if (ci != 0.0) {
            for (int n = 0; n + 1 < m; ++n) {
                h(base + n, base + n + 1) += ci * ladder_[n];
                h(base + n + 1, base + n) += ci * ladder_[n];
            }
        }
    }
    return h;
}

void CompositeHamiltonian::apply(double t, const Vector& x, Vector& y) const {
    const int d = system_dim();
    const int m = fock_dim();
    y.resize(x.size());

    y.array() = (diag0_.array() + t * bfull_.array()) * x.array();

    for (int i = 0; i < d; ++i) {
        auto yi = y.segment(i * m, m);
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            const Complex a_ij = a_tilde_(i, j);
            if (a_ij != Complex(0.0, 0.0)) {
                yi += a_ij * x.segment(j * m, m);
            }
        }
        const double ci = cvals_[i];
        if (ci != 0.0) {
            auto xi = x.segment(i * m, m);
            yi.head(m - 1).array() +=
                ci * ladder_.array() * xi.tail(m - 1).array();
            yi.tail(m - 1).array() +=
                ci * ladder_.array() * xi.head(m - 1).array();
        }
    }
}

std::pair<double, double> CompositeHamiltonian::spectral_interval(double t) const {
    const auto diag = diag0_.array() + t * bfull_.array();
    return {diag.minCoeff() - offdiag_row_bound_,
            diag.maxCoeff() + offdiag_row_bound_};
}

double CompositeHamiltonian::spectral_bound(double t) const {
    const auto [lo, hi] = spectral_interval(t);
    return std::max(std::abs(lo), std::abs(hi));
}

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (std::abs(amps_.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("StateVector: amplitudes are not normalized");
    }
}

StateVector StateVector::raw(Vector amplitudes) {
    return StateVector(std::move(amplitudes), RawTag{});
}

StateVector ground_state(const CompositeHamiltonian& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.at(t));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("ground_state: eigendecomposition failed");
    }
    const auto& evals = solver.eigenvalues();
    const double gap = evals(1) - evals(0);
    if (gap < 1e-8 * h.model().delta_gap) {
        throw std::runtime_error(
            "ground_state: lowest eigenvalue pair is nearly degenerate (gap " +
            std::to_string(gap) + ")");
    }

    Vector psi = solver.eigenvectors().col(0);
    Eigen::Index k;
    psi.cwiseAbs().maxCoeff(&k);
    psi *= std::conj(psi(k)) / std::abs(psi(k));
    psi.normalize();
    return StateVector(std::move(psi));
}

}  // namespace lzsim
