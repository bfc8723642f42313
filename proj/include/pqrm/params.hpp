// params.hpp: physical parameters, derived couplings, scaled units, fluxonium map
//
// Internal unit system used by every propagator:
//   hbar = 1, momentum unit 2*hbar*k, length unit 1/(2k),
//   energy unit E_r = (2*hbar*k)^2 / 2m, time unit hbar / E_r.
// In these units the atomic Hamiltonian reads
//   H = p^2 + (w^2/4) x^2 + (V/2) cos(2x),
// the band crossing sits at p = +-1 and the Brillouin zone is q in (-1, 1].

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pqrm {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double atomic_mass_unit = 1.66053907e-27;  // kg
inline constexpr double rb87_mass_u = 86.909180;
inline constexpr double rb87_mass = rb87_mass_u * atomic_mass_unit;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

inline double hz_to_rad(double hz) { return constants::two_pi * hz; }
inline double rad_to_hz(double rad) { return rad / constants::two_pi; }

/// Laboratory-frame system parameters. The lattice depth V and qubit
/// splitting w_q are two views of one quantity, V = 2 hbar w_q.
class PhysicalParams {
public:
    PhysicalParams(double mass, double wavelength, double trap_freq, double qubit_split = 0.0)
        : mass_(mass), wavelength_(wavelength), trap_freq_(trap_freq) {
        if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
        if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
        if (!(trap_freq > 0.0)) throw std::invalid_argument("trap frequency must be positive");
        set_qubit_split(qubit_split);
    }

    /// 87Rb driven at 783.5 nm, frequencies given in Hz (w/2pi).
    static PhysicalParams rubidium87(double trap_freq_hz, double qubit_split_hz = 0.0,
                                     double wavelength = 783.5e-9) {
        return {constants::rb87_mass, wavelength, hz_to_rad(trap_freq_hz), hz_to_rad(qubit_split_hz)};
    }

    double mass() const { return mass_; }                  // kg
    double wavelength() const { return wavelength_; }      // m
    double trap_freq() const { return trap_freq_; }        // rad/s
    double qubit_split() const { return qubit_split_; }    // rad/s
    double lattice_depth() const { return lattice_depth_; }  // J
    double wavevector() const { return constants::two_pi / wavelength_; }  // 1/m

    void set_qubit_split(double w_q) {
        if (!(w_q >= 0.0)) throw std::invalid_argument("qubit splitting must be non-negative");
        qubit_split_ = w_q;
        lattice_depth_ = 2.0 * constants::hbar * w_q;
    }
    void set_lattice_depth(double v) {
        if (!(v >= 0.0)) throw std::invalid_argument("lattice depth must be non-negative");
        lattice_depth_ = v;
        qubit_split_ = v / (2.0 * constants::hbar);
    }
    void set_trap_freq(double w) {
        if (!(w > 0.0)) throw std::invalid_argument("trap frequency must be positive");
        trap_freq_ = w;
    }

    bool operator==(const PhysicalParams&) const = default;

private:
    double mass_;
    double wavelength_;
    double trap_freq_;
    double qubit_split_ = 0.0;
    double lattice_depth_ = 0.0;
};

struct DerivedParams {
    double coupling;        // g = k sqrt(2 hbar w / m), rad/s
    double coupling_ratio;  // g / w
    double qubit_ratio;     // w_q / w
    double trap_period;     // T = 2 pi / w, s
    double recoil_energy;   // E_r = (2 hbar k)^2 / 2m, J
};

inline DerivedParams derive(const PhysicalParams& p) {
    using constants::hbar;
    const double k = p.wavevector();
    const double g = k * std::sqrt(2.0 * hbar * p.trap_freq() / p.mass());
    const double p0 = 2.0 * hbar * k;
    return {g, g / p.trap_freq(), p.qubit_split() / p.trap_freq(),
            constants::two_pi / p.trap_freq(), p0 * p0 / (2.0 * p.mass())};
}

/// Parameter set in the internal unit system plus the units needed to go back.
struct ScaledParams {
    double trap_freq;      // hbar w / E_r
    double qubit_split;    // hbar w_q / E_r
    double lattice_depth;  // V / E_r  (= 2 * qubit_split)
    double coupling;       // hbar g / E_r (= sqrt(trap_freq))

    double momentum_unit;  // 2 hbar k, kg m/s
    double length_unit;    // 1/(2k), m
    double energy_unit;    // E_r, J
    double time_unit;      // hbar / E_r, s

    double to_time(double t_scaled) const { return t_scaled * time_unit; }
    double from_time(double t_seconds) const { return t_seconds / time_unit; }
    double trap_period() const { return 2.0 * std::numbers::pi / trap_freq; }
};

inline ScaledParams nondimensionalize(const PhysicalParams& p) {
    using constants::hbar;
    const double k = p.wavevector();
    const double p0 = 2.0 * hbar * k;
    const double er = p0 * p0 / (2.0 * p.mass());
    const double w = hbar * p.trap_freq() / er;
    const double wq = hbar * p.qubit_split() / er;
    return {w, wq, p.lattice_depth() / er, derive(p).coupling * hbar / er,
            p0, 1.0 / (2.0 * k), er, hbar / er};
}

inline PhysicalParams redimensionalize(const ScaledParams& s) {
    using constants::hbar;
    const double k = s.momentum_unit / (2.0 * hbar);
    const double mass = s.momentum_unit * s.momentum_unit / (2.0 * s.energy_unit);
    PhysicalParams p(mass, constants::two_pi / k, s.trap_freq * s.energy_unit / hbar);
    p.set_lattice_depth(s.lattice_depth * s.energy_unit);
    return p;
}

/// Fluxonium circuit energies, hbar = 1 (all in rad/s).
struct FluxoniumParams {
    double E_C;
    double E_J;
    double E_L;
    double ext_flux = std::numbers::pi;  // external flux in units of Phi_0 / 2pi
};

struct FluxoniumMapping {
    double trap_freq;    // w, rad/s
    double qubit_split;  // w_q, rad/s
    double coupling;     // g, rad/s
};

/// Exact circuit -> atom dictionary (valid at ext_flux = pi):
/// w_q = E_J, w = sqrt(8 E_L E_C), g = (8 E_L E_C^3)^(1/4).
inline FluxoniumMapping fluxonium_map(const FluxoniumParams& f) {
    if (!(f.E_C > 0.0) || !(f.E_J > 0.0) || !(f.E_L > 0.0))
        throw std::invalid_argument("fluxonium energies must be positive");
    if (std::abs(f.ext_flux - std::numbers::pi) > 1e-12)
        throw std::invalid_argument("the exact atomic mapping requires ext_flux = pi");
    return {std::sqrt(8.0 * f.E_L * f.E_C), f.E_J,
            std::pow(8.0 * f.E_L * f.E_C * f.E_C * f.E_C, 0.25)};
}

/// Inverse map, using Phi = 4kx: E_C = 2 hbar k^2/m, E_L = m w^2 / (16 hbar k^2), E_J = w_q.
inline FluxoniumParams atomic_to_fluxonium(const PhysicalParams& p) {
    using constants::hbar;
    const double k = p.wavevector();
    FluxoniumParams f{2.0 * hbar * k * k / p.mass(), p.qubit_split(),
                      p.mass() * p.trap_freq() * p.trap_freq() / (16.0 * hbar * k * k),
                      std::numbers::pi};
    if (!(f.E_J > 0.0)) throw std::invalid_argument("fluxonium mapping requires a nonzero qubit splitting");
    return f;
}

}  // namespace pqrm
