// observables.hpp: measured quantities for grid, band and Fock states
//
// Conventions:
//   fold: q = p + 2hbar k (p <= 0), q = p - 2hbar k (p > 0), generalised to
//         band n = ceil(p / 4hbar k), so q is always in (-2hbar k, 2hbar k].
//   <N>:  hbar w (<N> + 1/2) = m w^2 <x^2>/2 + <q^2>/2m with folded q
//         (Fock states use <a^dag a> directly).
//   band occupation <sigma_x> = P(n_b = 0) - P(n_b = 1).
//   readout n_{p<0} = (N_{p<0} - N_{p>0}) / (N_{p<0} + N_{p>0}) after a Raman
//         pulse; the p = 0 sample is split evenly between both sides.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pqrm/band_models.hpp"
#include "pqrm/grid.hpp"
#include "pqrm/params.hpp"
#include "pqrm/qrm.hpp"

namespace pqrm {

enum class Model { grid, pqrm, multiband, qrm };

inline std::string_view to_string(Model m) {
    switch (m) {
        case Model::grid: return "grid";
        case Model::pqrm: return "pqrm";
        case Model::multiband: return "multiband";
        case Model::qrm: return "qrm";
    }
    return "?";
}

inline std::optional<Model> parse_model(std::string_view s) {
    if (s == "grid") return Model::grid;
    if (s == "pqrm") return Model::pqrm;
    if (s == "multiband") return Model::multiband;
    if (s == "qrm") return Model::qrm;
    return std::nullopt;
}

struct ObservableRecord {
    double time = 0.0;               // s
    double excitation_number = 0.0;  // <N>
    double mean_x = 0.0;             // m
    double mean_p = 0.0;             // kg m/s, unfolded
    double mean_q = 0.0;             // kg m/s, folded
    double var_x = 0.0;              // m^2
    double var_q = 0.0;              // (kg m/s)^2
    double band_occupation = 0.0;    // <sigma_x>
    std::optional<double> readout;   // n_{p<0}
    std::optional<double> overlap;   // QRM only
    Model model = Model::pqrm;
};

struct FoldedMomentum {
    double q;
    int band;
};

/// Scaled version: p and q in units of 2 hbar k.
inline FoldedMomentum fold_scaled(double p) {
    const int n = static_cast<int>(std::ceil(0.5 * p));
    return {p + 1.0 - 2.0 * n, n};
}

inline FoldedMomentum fold_momentum(double p, const PhysicalParams& params) {
    const double unit = 2.0 * constants::hbar * params.wavevector();
    const FoldedMomentum f = fold_scaled(p / unit);
    return {f.q * unit, f.band};
}

/// Raw moments in scaled units, normalised by the state norm.
struct Moments {
    double x = 0, x2 = 0, p = 0, q = 0, q2 = 0;
    double band0 = 0, band1 = 0;  // populations of n_b = 0 and 1
    double excitation = 0;
};

namespace detail {

inline int ceil_div(int a, int b) { return a > 0 ? (a + b - 1) / b : -((-a) / b); }

inline double excitation_from_moments(double x2, double q2, double w) { return 0.25 * w * x2 + q2 / w - 0.5; }

inline void position_moments(const Eigen::VectorXd& x, const Eigen::VectorXd& prob, Moments& m) {
    const double total = prob.sum();
    m.x = prob.dot(x) / total;
    m.x2 = prob.dot(x.cwiseAbs2()) / total;
}

}  // namespace detail

inline Moments moments(const GridState& s) {
    const Grid& g = *s.grid;
    Moments m;
    detail::position_moments(g.x, s.psi.cwiseAbs2(), m);
    const Eigen::VectorXd prob = to_momentum(s).cwiseAbs2();
    const double total = prob.sum();
    const int per = g.lattice_periods;
    for (int slot = 0; slot < g.n_points; ++slot) {
        const int j = g.signed_index(slot);
        const int band = detail::ceil_div(j, per);
        const double q = (j - band * per) * g.dp_scaled + 1.0;
        const double w = prob[slot] / total;
        m.p += w * g.p[slot];
        m.q += w * q;
        m.q2 += w * q * q;
        if (band == 0) m.band0 += w;
        if (band == 1) m.band1 += w;
    }
    return m;
}

inline Moments moments(const BandState& s) {
    const BandGrid& g = *s.grid;
    Moments m;
    Eigen::VectorXcd xs;
    g.fft->backward(s.amp, xs);
    detail::position_moments(g.x, xs.cwiseAbs2(), m);
    const double total = s.norm();
    for (int b = 0; b < g.n_bands; ++b) {
        double pop = 0.0;
        for (int j = 0; j < g.n_q; ++j) {
            const int i = b * g.n_q + j;
            const double w = std::norm(s.amp[i]) / total;
            pop += w;
            m.p += w * g.p(i);
            m.q += w * g.q(j);
            m.q2 += w * g.q(j) * g.q(j);
        }
        if (g.band_of_block(b) == 0) m.band0 = pop;
        if (g.band_of_block(b) == 1) m.band1 = pop;
    }
    return m;
}

/// Fock-space moments; x = (a + a^dag)/sqrt(w), q = i (sqrt(w)/2)(a^dag - a).
inline Moments moments(const FockState& s, const ScaledParams& sp) {
    Moments m;
    const double total = s.norm();
    double n_mean = 0.0;
    cplx a1 = 0.0, a2 = 0.0;
    for (int br = 0; br < 2; ++br) {
        double pop = 0.0;
        for (int n = 0; n < s.levels(); ++n) {
            const cplx c = s.at(br, n);
            pop += std::norm(c);
            n_mean += n * std::norm(c);
            if (n >= 1) a1 += std::sqrt(double(n)) * std::conj(s.at(br, n - 1)) * c;
            if (n >= 2) a2 += std::sqrt(double(n) * (n - 1)) * std::conj(s.at(br, n - 2)) * c;
        }
        (br == 0 ? m.band0 : m.band1) = pop / total;
    }
    n_mean /= total;
    a1 /= total;
    a2 /= total;
    const double w = sp.trap_freq;
    m.x = 2.0 * a1.real() / std::sqrt(w);
    m.x2 = (2.0 * a2.real() + 2.0 * n_mean + 1.0) / w;
    m.q = std::sqrt(w) * a1.imag();
    m.q2 = 0.25 * w * (2.0 * n_mean + 1.0 - 2.0 * a2.real());
    m.p = m.q + (m.band1 - m.band0);
    m.excitation = n_mean;
    return m;
}

inline double excitation_number(const GridState& s, const PhysicalParams& params) {
    const Moments m = moments(s);
    return detail::excitation_from_moments(m.x2, m.q2, nondimensionalize(params).trap_freq);
}

inline double excitation_number(const BandState& s, const PhysicalParams& params) {
    const Moments m = moments(s);
    return detail::excitation_from_moments(m.x2, m.q2, nondimensionalize(params).trap_freq);
}

inline double excitation_number(const FockState& s) {
    double n_mean = 0.0;
    for (int br = 0; br < 2; ++br)
        for (int n = 0; n < s.levels(); ++n) n_mean += n * std::norm(s.at(br, n));
    return n_mean / s.norm();
}

inline double band_occupation(const GridState& s) {
    const Moments m = moments(s);
    return m.band0 - m.band1;
}
inline double band_occupation(const BandState& s) { return (s.band_population(0) - s.band_population(1)) / s.norm(); }
inline double band_occupation(const FockState& s) {
    return (s.amp.head(s.levels()).squaredNorm() - s.amp.tail(s.levels()).squaredNorm()) / s.norm();
}

inline double sigma_z_readout(const GridState& s, const PulseSpec& pulse = {}) {
    const GridState after = apply_raman_pulse(s, pulse);
    const Eigen::VectorXd prob = to_momentum(after).cwiseAbs2();
    double neg = 0.0, pos = 0.0;
    for (int slot = 0; slot < prob.size(); ++slot) {
        const int j = after.grid->signed_index(slot);
        if (j < 0) neg += prob[slot];
        else if (j > 0) pos += prob[slot];
        else { neg += 0.5 * prob[slot]; pos += 0.5 * prob[slot]; }
    }
    return (neg - pos) / (neg + pos);
}

inline double sigma_z_readout(const BandState& s, const PulseSpec& pulse = {}) {
    const BandState after = apply_raman_pulse(s, pulse);
    const BandGrid& g = *after.grid;
    const int zero = g.zero_index();
    double neg = 0.0, pos = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = std::norm(after.amp[i]);
        if (i < zero) neg += w;
        else if (i > zero) pos += w;
        else { neg += 0.5 * w; pos += 0.5 * w; }
    }
    return (neg - pos) / (neg + pos);
}

inline double mean_position(const GridState& s, const PhysicalParams& params) {
    return moments(s).x * nondimensionalize(params).length_unit;
}
inline double mean_momentum(const GridState& s, const PhysicalParams& params) {
    return moments(s).p * nondimensionalize(params).momentum_unit;
}
inline double mean_quasimomentum(const GridState& s, const PhysicalParams& params) {
    return moments(s).q * nondimensionalize(params).momentum_unit;
}
inline double mean_position(const BandState& s, const PhysicalParams& params) {
    return moments(s).x * nondimensionalize(params).length_unit;
}
inline double mean_momentum(const BandState& s, const PhysicalParams& params) {
    return moments(s).p * nondimensionalize(params).momentum_unit;
}
inline double mean_quasimomentum(const BandState& s, const PhysicalParams& params) {
    return moments(s).q * nondimensionalize(params).momentum_unit;
}

inline ObservableRecord make_record(const Moments& m, const ScaledParams& sp, double time, Model model) {
    ObservableRecord r;
    r.time = time;
    r.model = model;
    r.excitation_number = model == Model::qrm ? m.excitation : detail::excitation_from_moments(m.x2, m.q2, sp.trap_freq);
    r.mean_x = m.x * sp.length_unit;
    r.mean_p = m.p * sp.momentum_unit;
    r.mean_q = m.q * sp.momentum_unit;
    r.var_x = (m.x2 - m.x * m.x) * sp.length_unit * sp.length_unit;
    r.var_q = (m.q2 - m.q * m.q) * sp.momentum_unit * sp.momentum_unit;
    r.band_occupation = m.band0 - m.band1;
    return r;
}

inline ObservableRecord observe(const GridState& s, const PhysicalParams& params,
                                const std::optional<PulseSpec>& pulse = PulseSpec{}) {
    ObservableRecord r = make_record(moments(s), nondimensionalize(params), s.time, Model::grid);
    if (pulse) r.readout = sigma_z_readout(s, *pulse);
    return r;
}

inline ObservableRecord observe(const BandState& s, const PhysicalParams& params,
                                const std::optional<PulseSpec>& pulse = PulseSpec{}) {
    const Model tag = s.grid->n_bands == 2 ? Model::pqrm : Model::multiband;
    ObservableRecord r = make_record(moments(s), nondimensionalize(params), s.time, tag);
    if (pulse) r.readout = sigma_z_readout(s, *pulse);
    return r;
}

inline ObservableRecord observe(const FockState& s, const PhysicalParams& params,
                                const FockState* initial = nullptr) {
    const ScaledParams sp = nondimensionalize(params);
    ObservableRecord r = make_record(moments(s, sp), sp, s.time, Model::qrm);
    if (initial) r.overlap = qrm_overlap(*initial, s);
    return r;
}

struct PhaseSpaceTrajectory {
    std::vector<std::pair<double, double>> position_momentum;       // (<x>, <p>)
    std::vector<std::pair<double, double>> position_quasimomentum;  // (<x>, <q>)
};

inline PhaseSpaceTrajectory phase_space_trajectory(const std::vector<ObservableRecord>& series) {
    PhaseSpaceTrajectory t;
    t.position_momentum.reserve(series.size());
    t.position_quasimomentum.reserve(series.size());
    for (const auto& r : series) {
        t.position_momentum.emplace_back(r.mean_x, r.mean_p);
        t.position_quasimomentum.emplace_back(r.mean_x, r.mean_q);
    }
    return t;
}

}  // namespace pqrm
