// grid.hpp: exact single-particle solver on a uniform position grid
//
// Strang split-step propagation of H = p^2/2m + m w^2 x^2/2 + (V/2) cos(4kx),
// trap-ground-state initial wavepackets and the instantaneous four-photon
// Raman pulse used for the sigma_z readout.

#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pqrm/errors.hpp"
#include "pqrm/fft.hpp"
#include "pqrm/params.hpp"

namespace pqrm {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

/// Uniform periodic grid. Positions x_n = (n - N/2) dx, momenta in FFT order.
/// The length is snapped to an even number of lattice periods (lambda/4), so
/// that p = +-2 hbar k and p = +-4 hbar k are exact grid momenta.
struct Grid {
    int n_points = 0;
    double length = 0.0;    // m
    double dx = 0.0;        // m
    int lattice_periods = 0;  // L / (lambda/4); also momentum samples per 4 hbar k

    double dx_scaled = 0.0;
    double dp_scaled = 0.0;  // = 2 / lattice_periods
    Eigen::VectorXd x;       // scaled positions
    Eigen::VectorXd p;       // scaled momenta, FFT order
    Eigen::VectorXcd to_true_momentum;  // e^{-i p_j x_0}: FFT output -> momentum amplitudes
    std::shared_ptr<const Fft> fft;

    /// Signed momentum index of FFT slot j.
    int signed_index(int j) const { return j < n_points / 2 ? j : j - n_points; }
    int slot(int signed_j) const { return signed_j >= 0 ? signed_j : signed_j + n_points; }

    /// Spectral wavenumbers p/hbar in 1/m, FFT ordering.
    Eigen::VectorXd momentum_axis(double wavevector) const { return p * (2.0 * wavevector); }
};

using GridPtr = std::shared_ptr<const Grid>;

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline GridPtr make_grid(const PhysicalParams& params, int n_points = 4096, double length = 80e-6) {
    if (!is_power_of_two(n_points)) throw std::invalid_argument("n_points must be a power of two");
    if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
    const double period = params.wavelength() / 4.0;
    int periods = 2 * static_cast<int>(std::lround(length / period / 2.0));
    if (periods < 2) periods = 2;

    auto g = std::make_shared<Grid>();
    g->n_points = n_points;
    g->lattice_periods = periods;
    g->length = periods * period;
    g->dx = g->length / n_points;
    if (!(g->dx < params.wavelength() / 16.0)) {
        std::ostringstream os;
        os << "grid spacing " << g->dx << " m does not resolve the lattice (need dx < lambda/16)";
        throw std::invalid_argument(os.str());
    }
    if (periods > n_points / 2)
        throw std::invalid_argument("grid momentum range does not reach +-4 hbar k");

    const double k = params.wavevector();
    const double length_scaled = 2.0 * k * g->length;  // = periods * pi
    g->dx_scaled = length_scaled / n_points;
    g->dp_scaled = 2.0 * std::numbers::pi / length_scaled;
    g->x.resize(n_points);
    g->p.resize(n_points);
    g->to_true_momentum.resize(n_points);
    const double x0 = -0.5 * n_points * g->dx_scaled;
    for (int n = 0; n < n_points; ++n) {
        g->x[n] = x0 + n * g->dx_scaled;
        g->p[n] = g->signed_index(n) * g->dp_scaled;
        g->to_true_momentum[n] = std::exp(-I * g->p[n] * x0);
    }
    g->fft = std::make_shared<Fft>(n_points);
    return g;
}

struct GridState {
    GridPtr grid;
    Eigen::VectorXcd psi;  // position amplitudes, sum |psi_n|^2 = 1
    double time = 0.0;     // s

    double norm() const { return psi.squaredNorm(); }
};

/// Momentum amplitudes with the same discrete normalization as psi.
inline Eigen::VectorXcd to_momentum(const GridState& s) {
    const Grid& g = *s.grid;
    Eigen::VectorXcd phi;
    g.fft->forward(s.psi, phi);
    phi = phi.cwiseProduct(g.to_true_momentum) / std::sqrt(double(g.n_points));
    return phi;
}

inline Eigen::VectorXcd from_momentum(const Grid& g, const Eigen::VectorXcd& phi) {
    Eigen::VectorXcd tmp = phi.cwiseProduct(g.to_true_momentum.conjugate());
    Eigen::VectorXcd psi;
    g.fft->backward(tmp, psi);
    return psi / std::sqrt(double(g.n_points));
}

enum class InitialKind { momentum_kick, qubit_g, qubit_e, custom };

struct InitialStateSpec {
    InitialKind kind = InitialKind::momentum_kick;
    double phase = 0.0;            // relative phase of the +2 hbar k component (custom)
    double momentum_offset = 0.0;  // kg m/s, added to every component

    /// Relative phase actually used for the two-component kinds.
    double relative_phase() const {
        switch (kind) {
            case InitialKind::qubit_g: return 0.0;
            case InitialKind::qubit_e: return std::numbers::pi;
            default: return phase;
        }
    }
};

/// Trap ground state Gaussian (width sqrt(hbar/2mw)) times the requested
/// momentum components: p = -2hbar k for momentum_kick, otherwise
/// (|-2hbar k> + e^{i phase} |+2hbar k>)/sqrt2.
inline GridState initial_state(const InitialStateSpec& spec, const PhysicalParams& params, GridPtr grid) {
    const ScaledParams s = nondimensionalize(params);
    const double offset = spec.momentum_offset / s.momentum_unit;
    GridState st{grid, Eigen::VectorXcd(grid->n_points), 0.0};
    const double rel = spec.relative_phase();
    for (int n = 0; n < grid->n_points; ++n) {
        const double x = grid->x[n];
        const double env = std::exp(-0.25 * s.trap_freq * x * x);
        cplx branches;
        if (spec.kind == InitialKind::momentum_kick)
            branches = std::exp(-I * x);
        else
            branches = (std::exp(-I * x) + std::exp(I * rel) * std::exp(I * x)) / std::sqrt(2.0);
        st.psi[n] = env * branches * std::exp(I * offset * x);
    }
    st.psi /= st.psi.norm();
    return st;
}

/// Largest |psi_n| in the outer 1/32 of the position grid on either side.
inline double boundary_amplitude(const GridState& s) {
    const int n = s.grid->n_points;
    const int edge = std::max(1, n / 32);
    const double scale = 1.0 / std::sqrt(s.norm());
    double m = 0.0;
    for (int i = 0; i < edge; ++i)
        m = std::max({m, std::abs(s.psi[i]), std::abs(s.psi[n - 1 - i])});
    return m * scale;
}

/// Largest |phi_j| in the outer 1/32 of the momentum range.
inline double momentum_edge_amplitude(const Grid& g, const Eigen::VectorXcd& phi) {
    const int n = g.n_points;
    const int edge = std::max(1, n / 32);
    double m = 0.0;
    for (int j = 0; j < n; ++j)
        if (std::abs(g.signed_index(j)) >= n / 2 - edge) m = std::max(m, std::abs(phi[j]));
    return m / phi.norm();
}

struct PulseSpec {
    double area = std::numbers::pi / 2.0;  // theta, rad
    double phase = 0.0;                    // phi, rad

    bool operator==(const PulseSpec&) const = default;
};

/// Instantaneous two-branch beamsplitter acting on every pair (chi+, chi-) at
/// momenta (p, p - 4 hbar k) with p in (0, 4 hbar k]:
///   chi+ -> cos(theta/2) chi+ - e^{i phi} sin(theta/2) chi-
///   chi- -> e^{-i phi} sin(theta/2) chi+ + cos(theta/2) chi-
/// phi is measured from the setting where theta = pi/2 maps |g> entirely onto
/// p < 0 (this is the -i e^{i phi'} form with phi' = phi - pi/2).
inline void raman_pair(cplx& plus, cplx& minus, const PulseSpec& pulse) {
    const double c = std::cos(0.5 * pulse.area);
    const double s = std::sin(0.5 * pulse.area);
    const cplx e = std::exp(I * pulse.phase);
    const cplx a = plus, b = minus;
    plus = c * a - e * s * b;
    minus = std::conj(e) * s * a + c * b;
}

inline void validate_pulse(const PulseSpec& pulse) {
    if (!(pulse.area >= 0.0 && pulse.area <= 2.0 * std::numbers::pi))
        throw std::invalid_argument("pulse area must lie in [0, 2pi]");
}

inline GridState apply_raman_pulse(const GridState& state, const PulseSpec& pulse) {
    validate_pulse(pulse);
    const Grid& g = *state.grid;
    Eigen::VectorXcd phi = to_momentum(state);
    const int shift = g.lattice_periods;  // 4 hbar k in grid steps
    for (int j = 1; j <= shift; ++j) raman_pair(phi[g.slot(j)], phi[g.slot(j - shift)], pulse);
    return {state.grid, from_momentum(g, phi), state.time};
}

/// Split-step propagator: half potential, full kinetic, half potential.
class GridPropagator {
public:
    static constexpr double norm_tolerance = 1e-8;
    static constexpr double boundary_tolerance = 1e-8;
    static constexpr long check_interval = 256;

    GridPropagator(GridPtr grid, const PhysicalParams& params)
        : grid_(std::move(grid)), scaled_(nondimensionalize(params)) {
        const Grid& g = *grid_;
        potential_.resize(g.n_points);
        kinetic_.resize(g.n_points);
        for (int n = 0; n < g.n_points; ++n) {
            const double x = g.x[n];
            potential_[n] = 0.25 * scaled_.trap_freq * scaled_.trap_freq * x * x +
                            0.5 * scaled_.lattice_depth * std::cos(2.0 * x);
            kinetic_[n] = g.p[n] * g.p[n];
        }
    }

    const Grid& grid() const { return *grid_; }
    const ScaledParams& scaled() const { return scaled_; }
    const Eigen::VectorXd& potential() const { return potential_; }  // in E_r
    const Eigen::VectorXd& kinetic() const { return kinetic_; }      // in E_r

    GridState propagate(const GridState& state, double dt, long n_steps) const {
        if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
        if (n_steps < 0) throw std::invalid_argument("step count must be non-negative");
        if (state.grid != grid_) throw std::invalid_argument("state lives on a different grid");
        GridState out = state;
        if (n_steps == 0) return out;

        const double tau = scaled_.from_time(dt);
        const Eigen::VectorXcd half_v = phases(potential_, 0.5 * tau);
        const Eigen::VectorXcd full_v = phases(potential_, tau);
        const Eigen::VectorXcd kin = phases(kinetic_, tau);
        const double inv_n = 1.0 / grid_->n_points;
        const double norm0 = state.norm();

        Eigen::VectorXcd& psi = out.psi;
        Eigen::VectorXcd phi(grid_->n_points);
        psi = psi.cwiseProduct(half_v);
        for (long s = 0; s < n_steps; ++s) {
            grid_->fft->forward(psi, phi);
            phi = phi.cwiseProduct(kin);
            grid_->fft->backward(phi, psi);
            if (s + 1 < n_steps)
                psi = psi.cwiseProduct(full_v) * inv_n;
            else
                psi = psi.cwiseProduct(half_v) * inv_n;
            if ((s + 1) % check_interval == 0 || s + 1 == n_steps) {
                check_boundaries(out, phi, state.time + (s + 1) * dt);
            }
        }
        out.time = state.time + n_steps * dt;
        const double drift = std::abs(out.norm() - norm0);
        if (drift > norm_tolerance) {
            std::ostringstream os;
            os << "grid propagation norm drift " << drift << " exceeds " << norm_tolerance;
            throw NumericalError(os.str());
        }
        return out;
    }

    /// <H> in joules.
    double energy(const GridState& s) const {
        const Eigen::VectorXcd phi = to_momentum(s);
        const double nrm = s.norm();
        const double pot = s.psi.cwiseAbs2().dot(potential_);
        const double kin = phi.cwiseAbs2().dot(kinetic_);
        return (pot + kin) / nrm * scaled_.energy_unit;
    }

private:
    static Eigen::VectorXcd phases(const Eigen::VectorXd& e, double tau) {
        Eigen::VectorXcd out(e.size());
        for (Eigen::Index i = 0; i < e.size(); ++i) out[i] = std::exp(-I * e[i] * tau);
        return out;
    }

    void check_boundaries(const GridState& s, const Eigen::VectorXcd& phi, double t) const {
        const double b = boundary_amplitude(s);
        if (b > boundary_tolerance) {
            std::ostringstream os;
            os << "wavepacket reached the position-grid boundary at t = " << t << " s (amplitude " << b
               << "); enlarge grid.length_um";
            throw BoundaryError(os.str());
        }
        const double pb = momentum_edge_amplitude(*grid_, phi);
        if (pb > boundary_tolerance) {
            std::ostringstream os;
            os << "wavepacket reached the momentum-grid boundary at t = " << t << " s (amplitude " << pb
               << "); increase grid.n_points";
            throw BoundaryError(os.str());
        }
    }

    GridPtr grid_;
    ScaledParams scaled_;
    Eigen::VectorXd potential_;
    Eigen::VectorXd kinetic_;
};

}  // namespace pqrm
