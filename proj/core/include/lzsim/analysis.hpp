// analysis.hpp — Occupation-probability readout and the closed-form transition
// formulas used to validate simulation output.

#pragma once

#include "lzsim/model.hpp"

#include <span>

namespace lzsim {

// Final probabilities of the system states, P_i in [0, 1], sum 1 within the
// propagation norm drift.
struct PopulationTriple {
    RealVector p;

    int dim() const { return static_cast<int>(p.size()); }
    double sum() const { return p.sum(); }
};

// P_i = sum_n |<i, n|psi>|^2 (projection onto bare system states).
PopulationTriple system_populations(const StateVector& psi, int d, int n_fock);

// Q_n = sum_i |<i, n|psi>|^2; feeds the truncation-leakage diagnostic.
RealVector oscillator_populations(const StateVector& psi, int d, int n_fock);

// Population of the top `levels` Fock states, summed over system states.
double truncation_leakage(const StateVector& psi, int d, int n_fock,
                          int levels = 2);

// Readout diagnostic: populations classified through the eigenbasis of H(t)
// instead of bare projection. Each eigenvector is assigned to the system
// state carrying most of its weight.
PopulationTriple eigenbasis_populations(const CompositeHamiltonian& h, double t,
                                        const StateVector& psi);

// The two-level sweep transition formula, exp(-2 pi delta).
double lz_probability(double delta);

// Bow-tie model under strong decoherence that leaves the 1-2 crossing
// coherent: sequential crossings give
//   P1 = e, P2 = (1 - e) e, P3 = (1 - e)^2   with e = exp(-2 pi delta).
PopulationTriple bowtie_strong_decoherence(double delta);

// Triangle model in the incoherent limit: three sequential crossings with
// slope- and gap-rescaled exponents, no interference terms.
PopulationTriple triangle_incoherent(double delta);

// Relative gap amplitudes of the crossing sequence |1,0> <-> |2,n> produced
// by an oscillator displaced by alpha: alpha^n exp(-alpha^2/2) / sqrt(n!)
// (equivalently the displaced-vacuum overlap |<n|D(alpha)|0>|). Squared
// amplitudes form a Poisson distribution with mean alpha^2.
struct GapSequence {
    double alpha = 0.0;
    RealVector gaps;
};

GapSequence gap_sequence(double alpha, int n_max);

// Peak location by parabolic refinement around the grid argmax. `interior`
// is false when the maximum sits on a grid endpoint (no bracketing).
struct PeakEstimate {
    double delta_at_peak = 0.0;
    double peak_value = 0.0;
    bool interior = false;
};

PeakEstimate peak_of(std::span<const double> delta_grid,
                     std::span<const double> values);

}  // namespace lzsim
