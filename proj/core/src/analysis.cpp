#include "lzsim/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lzsim {

namespace {

void check_layout(const StateVector& psi, int d, int n_fock) {
    if (d < 1 || n_fock < 1 || psi.size() != d * n_fock) {
        throw std::invalid_argument("state layout does not match d * n_fock");
    }
}

}  // namespace

PopulationTriple system_populations(const StateVector& psi, int d, int n_fock) {
    check_layout(psi, d, n_fock);
    RealVector p = RealVector::Zero(d);
    for (int i = 0; i < d; ++i) {
        p[i] = psi.amplitudes().segment(i * n_fock, n_fock).squaredNorm();
    }
    return PopulationTriple{std::move(p)};
}

RealVector oscillator_populations(const StateVector& psi, int d, int n_fock) {
    check_layout(psi, d, n_fock);
    RealVector q = RealVector::Zero(n_fock);
    for (int i = 0; i < d; ++i) {
        for (int n = 0; n < n_fock; ++n) {
            q[n] += std::norm(psi.amplitudes()[basis_index(i, n, n_fock)]);
        }
    }
    return q;
}

double truncation_leakage(const StateVector& psi, int d, int n_fock, int levels) {
    check_layout(psi, d, n_fock);
    levels = std::min(levels, n_fock);
    double leak = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int n = n_fock - levels; n < n_fock; ++n) {
            leak += std::norm(psi.amplitudes()[basis_index(i, n, n_fock)]);
        }
    }
    return leak;
}

PopulationTriple eigenbasis_populations(const CompositeHamiltonian& h, double t,
                                        const StateVector& psi) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.at(t));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenbasis_populations: eigh failed");
    }
    const int d = h.system_dim();
    const int m = h.fock_dim();
    RealVector p = RealVector::Zero(d);
    for (int k = 0; k < h.dim(); ++k) {
        const Vector vec = solver.eigenvectors().col(k);
        int best = 0;
        double best_weight = -1.0;
        for (int i = 0; i < d; ++i) {
            const double w = vec.segment(i * m, m).squaredNorm();
            if (w > best_weight) {
                best_weight = w;
                best = i;
            }
        }
        p[best] += std::norm(vec.dot(psi.amplitudes()));
    }
    return PopulationTriple{std::move(p)};
}

double lz_probability(double delta) {
    if (delta < 0.0) {
        throw std::invalid_argument("lz_probability: delta must be >= 0");
    }
    return std::exp(-2.0 * std::numbers::pi * delta);
}

PopulationTriple bowtie_strong_decoherence(double delta) {
    const double e = lz_probability(delta);
    RealVector p(3);
    p << e, (1.0 - e) * e, (1.0 - e) * (1.0 - e);
    return PopulationTriple{std::move(p)};
}

PopulationTriple triangle_incoherent(double delta) {
    const double x = 2.0 * std::numbers::pi * delta;
    if (delta < 0.0) {
        throw std::invalid_argument("triangle_incoherent: delta must be >= 0");
    }
    // Slope differences 1, 1.5, 0.5 and gap factors 1, 0.8, 0.55 of the
    // triangle matrices rescale the exponent of each crossing.
    const double a = std::exp(-x);
    const double b = std::exp(-x * 0.8 * 0.8 / 1.5);
    const double c = std::exp(-x * 0.55 * 0.55 / 0.5);
    RealVector p(3);
    p << a * b,
        (1.0 - a) * c + a * (1.0 - b) * (1.0 - c),
        a * (1.0 - b) * c + (1.0 - a) * (1.0 - c);
    return PopulationTriple{std::move(p)};
}

GapSequence gap_sequence(double alpha, int n_max) {
    if (alpha < 0.0 || n_max < 0) {
        throw std::invalid_argument("gap_sequence: need alpha >= 0 and n_max >= 0");
    }
    RealVector gaps(n_max + 1);
    // gaps[n] = alpha^n exp(-alpha^2/2) / sqrt(n!), built by recurrence.
    double g = std::exp(-0.5 * alpha * alpha);
    gaps[0] = g;
    for (int n = 1; n <= n_max; ++n) {
        g *= alpha / std::sqrt(static_cast<double>(n));
        gaps[n] = g;
    }
    return GapSequence{alpha, std::move(gaps)};
}

PeakEstimate peak_of(std::span<const double> delta_grid,
                     std::span<const double> values) {
    if (delta_grid.empty() || delta_grid.size() != values.size()) {
        throw std::invalid_argument("peak_of: grids must be non-empty, same size");
    }
    std::size_t m = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[m]) m = i;
    }
    if (m == 0 || m + 1 == values.size()) {
        return PeakEstimate{delta_grid[m], values[m], false};
    }

    // Quadratic through the three bracketing points (uneven spacing allowed).
    const double x0 = delta_grid[m - 1], x1 = delta_grid[m], x2 = delta_grid[m + 1];
    const double y0 = values[m - 1], y1 = values[m], y2 = values[m + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    if (!(curv < 0.0)) {
        return PeakEstimate{x1, y1, false};
    }
    double xv = 0.5 * (x0 + x1 - d01 / curv);
    xv = std::clamp(xv, x0, x2);
    // Newton-form evaluation of the fitted quadratic at the vertex.
    const double value = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
    return PeakEstimate{xv, value, true};
}

}  // namespace lzsim
