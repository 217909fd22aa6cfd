#include "lzsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lzsim {

namespace {

constexpr double kNormDriftLimit = 1e-6;   // accepted-run bound
constexpr double kNormAbortFactor = 10.0;  // abort when drift exceeds 10x
constexpr double kMaxPhaseWidth = 256.0;   // cap on (spectral half-width) * dt

}  // namespace

namespace detail {

// Normalized with J_0 + 2 sum J_2k = 1; cheaper than kmax separate
// cyl_bessel_j calls.
void bessel_j_sequence(double z, int kmax, std::vector<double>& out) {
    out.assign(kmax + 1, 0.0);
    if (z == 0.0) {
        out[0] = 1.0;
        return;
    }
    const int start = kmax + 16 +
                      static_cast<int>(1.5 * std::sqrt(static_cast<double>(kmax) + z));
    double jp = 0.0;      // J_{k+1}
    double jc = 1e-300;   // J_k seed
    double norm = 0.0;
    for (int k = start; k >= 0; --k) {
        const double jm = (2.0 * (k + 1) / z) * jc - jp;  // J_k from k+1, k+2
        jp = jc;
        jc = jm;
        if (!std::isfinite(jc) || std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for (int i = std::min(k, kmax); i <= kmax; ++i) out[i] *= 1e-250;
        }
        if (k <= kmax) out[k] = jc;
        if (k > 0 && k % 2 == 0) norm += jc;
    }
    norm = 2.0 * norm + jc;
    for (double& v : out) v /= norm;
}

}  // namespace detail

namespace {

// Applies exp(-i H(t_mid) dt) by a Chebyshev expansion on the Gershgorin
// interval of H(t_mid). Exact to the expansion cutoff (~1e-14), so the map
// is unitary to roundoff.
class ChebyshevPropagator {
public:
    explicit ChebyshevPropagator(const CompositeHamiltonian& h)
        : h_(h), phi0_(h.dim()), phi1_(h.dim()), phi2_(h.dim()), hx_(h.dim()) {}

    void step(double t_mid, double dt, Vector& psi) {
        const auto [lo, hi] = h_.spectral_interval(t_mid);
        const double center = 0.5 * (hi + lo);
        const double half_width = 0.5 * (hi - lo) + 1e-12;
        const double z = half_width * dt;

        // Generous coefficient table, then truncate the expensive matvec
        // loop at the 1e-16 coefficient tail.
        int table = static_cast<int>(z + 24.0 + 10.0 * std::sqrt(z + 4.0));
        detail::bessel_j_sequence(z, table, bessel_);
        while (std::abs(bessel_[table]) + std::abs(bessel_[table - 1]) > 1e-16) {
            table = static_cast<int>(1.3 * table) + 16;
            detail::bessel_j_sequence(z, table, bessel_);
        }
        int kmax = table;
        while (kmax > 2 && std::abs(bessel_[kmax - 1]) + std::abs(bessel_[kmax]) <
                               1e-16) {
            --kmax;
        }

        // psi <- e^{-i c dt} [ J_0 + 2 sum_k (-i)^k J_k T_k(Hs) ] psi,
        // with Hs = (H - c) / half_width mapped onto [-1, 1].
        const Complex phase = std::polar(1.0, -center * dt);
        phi0_ = psi;
        apply_scaled(t_mid, center, half_width, phi0_, phi1_);
        Vector& acc = psi;
        acc = bessel_[0] * phi0_;
        Complex ik(0.0, -1.0);  // (-i)^k
        acc += (2.0 * bessel_[1] * ik) * phi1_;
        for (int k = 2; k <= kmax; ++k) {
            apply_scaled(t_mid, center, half_width, phi1_, phi2_);
            phi2_ = 2.0 * phi2_ - phi0_;
            ik *= Complex(0.0, -1.0);
            acc += (2.0 * bessel_[k] * ik) * phi2_;
            phi0_.swap(phi1_);
            phi1_.swap(phi2_);
        }
        acc *= phase;
        matvecs_ += kmax;
    }

    long matvecs() const { return matvecs_; }

private:
    void apply_scaled(double t, double center, double half_width,
                      const Vector& x, Vector& y) {
        h_.apply(t, x, hx_);
        y = (hx_ - center * x) / half_width;
    }

    const CompositeHamiltonian& h_;
    Vector phi0_, phi1_, phi2_, hx_;
    std::vector<double> bessel_;
    long matvecs_ = 0;
};

[[noreturn]] void abort_run(const char* what, double t, double h, double extra) {
    std::ostringstream msg;
    msg << what << " at t=" << t << ", h=" << h << " (" << extra << ")";
    throw PropagationError(msg.str());
}

}  // namespace

EvolutionConfig default_config(const ModelSpec& model, double vt_extent) {
    const double scale = model.delta_gap > 0.0 ? model.delta_gap : 1.0;
    EvolutionConfig config;
    config.t_start = -vt_extent * scale / model.sweep_rate;
    config.t_end = vt_extent * scale / model.sweep_rate;
    return config;
}

// Exponential midpoint stepping: each step applies the exact exponential of
// H frozen at the step midpoint. The embedded error estimate compares one
// full step against two half steps; acceptance keeps the Richardson
// extrapolation of the pair (the midpoint rule is time-symmetric, so the
// extrapolated update is fourth order). Unitarity of each exponential keeps
// the norm drift at the roundoff level regardless of rel_tol.
EvolutionResult evolve(const CompositeHamiltonian& h, const StateVector& psi0,
                       const EvolutionConfig& config) {
    if (!(config.t_start < config.t_end)) {
        throw std::invalid_argument("evolve: need t_start < t_end");
    }
    if (!(config.rel_tol > 0.0) || config.rel_tol > 1e-3) {
        throw std::invalid_argument("evolve: rel_tol must be in (0, 1e-3]");
    }
    if (psi0.size() != h.dim()) {
        throw std::invalid_argument("evolve: state dimension mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve: psi0 is not normalized");
    }

    std::vector<double> samples = config.sample_times;
    std::sort(samples.begin(), samples.end());

    Vector y = psi0.amplitudes();
    double t = config.t_start;
    const double span = config.t_end - config.t_start;
    double hmax = config.max_step > 0.0 ? std::min(config.max_step, span) : span;

    ChebyshevPropagator stepper(h);
    Vector y_full(h.dim()), y_half(h.dim());

    EvolutionResult result{StateVector::raw(y), 0.0, 0, {}};
    auto sample_it = samples.begin();
    while (sample_it != samples.end() && *sample_it <= t) {
        result.trajectory.emplace_back(t, StateVector::raw(y));
        ++sample_it;
    }

    // Initial step from the a priori commutator bound of the midpoint rule;
    // the controller refines it from the measured estimates.
    const double comm = h.commutator_norm();
    double dt = comm > 0.0 ? std::cbrt(12.0 * config.rel_tol / comm) : hmax;
    dt = std::min(dt, hmax);

    const double eps = std::numeric_limits<double>::epsilon();
    while (t < config.t_end) {
        double target = config.t_end;
        if (sample_it != samples.end()) target = std::min(target, *sample_it);
        const double phase_cap =
            kMaxPhaseWidth / std::max(h.spectral_bound(t), 1e-12);
        dt = std::min({dt, hmax, phase_cap});
        if (t + dt > target) dt = target - t;
        if (dt < 16.0 * eps * std::max(std::abs(t), 1.0)) {
            abort_run("evolve: step size underflow", t, dt, config.rel_tol);
        }

        y_full = y;
        stepper.step(t + 0.5 * dt, dt, y_full);
        y_half = y;
        stepper.step(t + 0.25 * dt, 0.5 * dt, y_half);
        stepper.step(t + 0.75 * dt, 0.5 * dt, y_half);

        const double err = (y_full - y_half).norm() / 3.0;
        if (err <= config.rel_tol) {
            t += dt;
            // land exactly on clamp targets despite rounding
            if (std::abs(target - t) < 32.0 * eps * std::max(std::abs(target), 1.0)) {
                t = target;
            }
            y = y_half + (y_half - y_full) / 3.0;
            ++result.steps_taken;

            const double drift = std::abs(y.norm() - 1.0);
            if (drift > kNormAbortFactor * kNormDriftLimit) {
                abort_run("evolve: norm drift exceeded limit", t, dt, drift);
            }
            while (sample_it != samples.end() && t >= *sample_it) {
                result.trajectory.emplace_back(t, StateVector::raw(y));
                ++sample_it;
            }
        }
        const double fac = std::clamp(
            0.9 * std::cbrt(config.rel_tol / std::max(err, 1e-30)), 0.25, 4.0);
        dt *= (err <= config.rel_tol) ? fac : std::min(fac, 1.0);
    }

    result.final_state = StateVector::raw(y);
    result.norm_drift = std::abs(y.norm() - 1.0);
    return result;
}

StateVector evolve_piecewise_oracle(const CompositeHamiltonian& h,
                                    const StateVector& psi0, int n_slices,
                                    double t_start, double t_end) {
    if (n_slices < 1) {
        throw std::invalid_argument("evolve_piecewise_oracle: n_slices >= 1");
    }
    if (psi0.size() != h.dim()) {
        throw std::invalid_argument("evolve_piecewise_oracle: dimension mismatch");
    }
    const double dt = (t_end - t_start) / n_slices;
    Vector psi = psi0.amplitudes();
    for (int s = 0; s < n_slices; ++s) {
        const double t_mid = t_start + (s + 0.5) * dt;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h.at(t_mid));
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("evolve_piecewise_oracle: eigh failed");
        }
        const auto& evals = solver.eigenvalues();
        const Matrix& vecs = solver.eigenvectors();
        Vector coeffs = vecs.adjoint() * psi;
        for (int i = 0; i < coeffs.size(); ++i) {
            coeffs[i] *= std::polar(1.0, -evals(i) * dt);
        }
        psi = vecs * coeffs;
    }
    return StateVector::raw(std::move(psi));
}

}  // namespace lzsim
