// qrm.hpp: standard quantum Rabi model in a truncated Fock space
//
// H = w a^dag a + (w_q/2) X + i g S (a^dag - a)   (scaled units)
// written in the momentum-branch basis: S = -1 for n_b = 0 (p < 0), +1 for
// n_b = 1, and X flips the branch. This is the textbook form with the Pauli
// labels relabelled (S <-> sigma_x, X <-> sigma_z). Evolution is exact via the
// eigendecomposition of a real symmetric form obtained with the diagonal
// gauge |n> -> i^n |n>.

#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pqrm/errors.hpp"
#include "pqrm/grid.hpp"
#include "pqrm/params.hpp"

namespace pqrm {

struct FockState {
    int n_max = 0;
    Eigen::VectorXcd amp;  // index s * (n_max + 1) + n, s = branch n_b
    double time = 0.0;     // s

    int levels() const { return n_max + 1; }
    cplx& at(int s, int n) { return amp[s * levels() + n]; }
    const cplx& at(int s, int n) const { return amp[s * levels() + n]; }
    double norm() const { return amp.squaredNorm(); }
};

/// Vacuum (or coherent state, for a momentum offset) times the branch spinor
/// matching InitialStateSpec: momentum_kick -> n_b = 0, qubit kinds ->
/// (|0> + e^{i phase}|1>)/sqrt2.
inline FockState fock_initial_state(const InitialStateSpec& spec, const PhysicalParams& params, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    const ScaledParams s = nondimensionalize(params);
    FockState st{n_max, Eigen::VectorXcd::Zero(2 * (n_max + 1)), 0.0};
    // <q> = sqrt(w) Im(alpha) for a coherent state.
    const cplx alpha = I * (spec.momentum_offset / s.momentum_unit) / std::sqrt(s.trap_freq);
    Eigen::VectorXcd osc(n_max + 1);
    osc[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= n_max; ++n) osc[n] = osc[n - 1] * alpha / std::sqrt(double(n));
    cplx c0 = 1.0, c1 = 0.0;
    if (spec.kind != InitialKind::momentum_kick) {
        c0 = 1.0 / std::sqrt(2.0);
        c1 = std::exp(I * spec.relative_phase()) / std::sqrt(2.0);
    }
    st.amp.head(n_max + 1) = c0 * osc;
    st.amp.tail(n_max + 1) = c1 * osc;
    st.amp /= st.amp.norm();
    return st;
}

/// |<a|b>|^2.
inline double qrm_overlap(const FockState& a, const FockState& b) {
    if (a.n_max != b.n_max) throw std::invalid_argument("overlap of states with different Fock truncations");
    return std::norm(a.amp.dot(b.amp));
}

/// Population in the top 10% of Fock levels.
inline double top_level_population(const FockState& s) {
    const int first = static_cast<int>(std::ceil(0.9 * s.levels()));
    double w = 0.0;
    for (int br = 0; br < 2; ++br)
        for (int n = first; n < s.levels(); ++n) w += std::norm(s.at(br, n));
    return w;
}

class QrmPropagator {
public:
    static constexpr double truncation_tolerance = 1e-8;

    QrmPropagator(const PhysicalParams& params, int n_max = 600)
        : scaled_(nondimensionalize(params)), n_max_(n_max) {
        if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
        const int dim = 2 * (n_max + 1);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        const double w = scaled_.trap_freq, g = scaled_.coupling, half_wq = 0.5 * scaled_.qubit_split;
        for (int s = 0; s < 2; ++s) {
            const double branch = s == 0 ? -1.0 : 1.0;
            for (int n = 0; n <= n_max; ++n) {
                const int i = s * (n_max + 1) + n;
                h(i, i) = w * n;
                if (n < n_max) h(i + 1, i) = h(i, i + 1) = -g * branch * std::sqrt(n + 1.0);
            }
        }
        for (int n = 0; n <= n_max; ++n) h(n, n_max + 1 + n) = h(n_max + 1 + n, n) = half_wq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        if (es.info() != Eigen::Success) throw NumericalError("QRM eigendecomposition failed");
        energies_ = es.eigenvalues();
        vectors_ = es.eigenvectors();
        gauge_.resize(dim);
        static const cplx powers[4] = {1.0, I, -1.0, -I};
        for (int i = 0; i < dim; ++i) gauge_[i] = powers[(i % (n_max + 1)) % 4];
    }

    int n_max() const { return n_max_; }
    const ScaledParams& scaled() const { return scaled_; }

    /// Complex Hermitian Hamiltonian in the branch (x) Fock basis, units of E_r.
    Eigen::MatrixXcd hamiltonian() const {
        const int dim = 2 * (n_max_ + 1);
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        const double w = scaled_.trap_freq, g = scaled_.coupling, half_wq = 0.5 * scaled_.qubit_split;
        for (int s = 0; s < 2; ++s) {
            const double branch = s == 0 ? -1.0 : 1.0;
            for (int n = 0; n <= n_max_; ++n) {
                const int i = s * (n_max_ + 1) + n;
                h(i, i) = w * n;
                if (n < n_max_) {
                    h(i + 1, i) = I * g * branch * std::sqrt(n + 1.0);   // i g S a^dag
                    h(i, i + 1) = -I * g * branch * std::sqrt(n + 1.0);  // -i g S a
                }
            }
        }
        for (int n = 0; n <= n_max_; ++n) h(n, n_max_ + 1 + n) = h(n_max_ + 1 + n, n) = half_wq;
        return h;
    }

    /// Spectral coefficients of a state, reusable for many evolution times.
    struct Coefficients {
        Eigen::VectorXd re, im;
        double t0;
    };

    Coefficients decompose(const FockState& s) const {
        check_shape(s);
        const Eigen::VectorXcd c = s.amp.cwiseProduct(gauge_);
        return {vectors_.transpose() * c.real(), vectors_.transpose() * c.imag(), s.time};
    }

    FockState at(const Coefficients& c, double t) const {
        const double tau = scaled_.from_time(t - c.t0);
        const Eigen::Index dim = energies_.size();
        Eigen::VectorXd re(dim), im(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            const cplx v = std::exp(-I * energies_[k] * tau) * cplx(c.re[k], c.im[k]);
            re[k] = v.real();
            im[k] = v.imag();
        }
        FockState out{n_max_, Eigen::VectorXcd(dim), t};
        out.amp.real() = vectors_ * re;
        out.amp.imag() = vectors_ * im;
        out.amp = out.amp.cwiseProduct(gauge_.conjugate());
        check_truncation(out);
        return out;
    }

    FockState evolve(const FockState& s, double t) const { return at(decompose(s), s.time + t); }

    FockState propagate(const FockState& s, double dt, long n_steps) const {
        if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
        if (n_steps < 0) throw std::invalid_argument("step count must be non-negative");
        if (n_steps == 0) return s;
        return evolve(s, dt * n_steps);
    }

private:
    void check_shape(const FockState& s) const {
        if (s.n_max != n_max_) throw std::invalid_argument("state truncation differs from the propagator's");
    }

    void check_truncation(const FockState& s) const {
        const double top = top_level_population(s);
        if (top > truncation_tolerance) {
            std::ostringstream os;
            os << "Fock truncation n_max = " << n_max_ << " inadequate at t = " << s.time
               << " s (top-level population " << top << ")";
            throw TruncationError(os.str());
        }
    }

    ScaledParams scaled_;
    int n_max_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
    Eigen::VectorXcd gauge_;
};

inline FockState qrm_propagate(const FockState& state, const PhysicalParams& params, double dt, long n_steps) {
    return QrmPropagator(params, state.n_max).propagate(state, dt, n_steps);
}

/// Evolves an initial QRM state to every requested time, doubling n_max (at
/// most twice) whenever the top-level population check fails.
inline std::vector<FockState> evolve_qrm_series(const InitialStateSpec& spec, const PhysicalParams& params,
                                                const std::vector<double>& times, int n_max = 600) {
    for (int attempt = 0;; ++attempt) {
        try {
            QrmPropagator prop(params, n_max);
            const auto coeffs = prop.decompose(fock_initial_state(spec, params, n_max));
            std::vector<FockState> out;
            out.reserve(times.size());
            for (double t : times) out.push_back(prop.at(coeffs, t));
            return out;
        } catch (const TruncationError&) {
            if (attempt == 2) throw;
            n_max *= 2;
        }
    }
}

}  // namespace pqrm
