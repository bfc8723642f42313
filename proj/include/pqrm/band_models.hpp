// band_models.hpp: Bloch-band reduced propagators (two-band periodic QRM, N-band)
//
// A band state stores one amplitude per (band, quasimomentum) pair, laid out
// on the concatenated momentum axis: block b holds band n = lowest_band + b at
// p = q + (2n - 1) (scaled units, q in (-1, 1]). For two bands this is
// p in (-2, 2], n_b = 0 on (-2, 0] and n_b = 1 on (0, 2].
//
// Splitting per step:
//   A: p^2 kinetic term + (V/4) coupling of adjacent bands at equal q, an exact
//      n_bands x n_bands unitary per quasimomentum sample;
//   B: harmonic term (w^2/4) x^2 with x = i d/dp, applied spectrally on the
//      concatenated axis. Continuity across band blocks is the zone-edge
//      (Umklapp) coupling; the wrap at the two ends of the axis is a
//      truncation artifact monitored by wrap_weight().

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
#include "pqrm/grid.hpp"
#include "pqrm/params.hpp"

namespace pqrm {

struct BandGrid {
    int n_bands = 2;
    int n_q = 0;          // quasimomentum samples per band
    int lowest_band = 0;  // band index of block 0
    double dq = 0.0;      // = 2 / n_q
    Eigen::VectorXd x;    // scaled positions conjugate to the concatenated axis (FFT order)
    std::shared_ptr<const Fft> fft;

    int size() const { return n_bands * n_q; }
    double p_min() const { return 2.0 * lowest_band - 2.0; }  // excluded end of the axis
    double p_max() const { return p_min() + 2.0 * n_bands; }  // included end
    double p(int i) const { return p_min() + (i + 1) * dq; }
    double q(int j) const { return -1.0 + (j + 1) * dq; }
    int band_of_block(int b) const { return lowest_band + b; }
    /// Block index holding band n, or -1 when n is not represented.
    int block_of_band(int n) const {
        const int b = n - lowest_band;
        return (b >= 0 && b < n_bands) ? b : -1;
    }
    /// Concatenated index of the p = 0 sample (q = +1 of band 0).
    int zero_index() const { return (1 - lowest_band) * n_q - 1; }
};

using BandGridPtr = std::shared_ptr<const BandGrid>;

/// n_bands >= 2 bands centred on the qubit pair {0, 1}; n_q samples each.
inline BandGridPtr make_band_grid(int n_bands = 2, int n_q = 512) {
    if (n_bands < 2) throw std::invalid_argument("band models need at least two bands");
    if (n_q < 4) throw std::invalid_argument("need at least four quasimomentum samples per band");
    auto g = std::make_shared<BandGrid>();
    g->n_bands = n_bands;
    g->n_q = n_q;
    g->lowest_band = -((n_bands - 2) / 2);
    g->dq = 2.0 / n_q;
    const int m = g->size();
    g->x.resize(m);
    const double dx = 2.0 * std::numbers::pi / (m * g->dq);
    for (int i = 0; i < m; ++i) g->x[i] = (i < m / 2 ? i : i - m) * dx;
    g->fft = std::make_shared<Fft>(m);
    return g;
}

struct BandState {
    BandGridPtr grid;
    Eigen::VectorXcd amp;  // concatenated-axis amplitudes, sum |amp|^2 = 1
    double time = 0.0;     // s
    double max_edge_weight = 0.0;  // largest wrap_weight() seen while propagating

    double norm() const { return amp.squaredNorm(); }
    double band_population(int n) const {
        const int b = grid->block_of_band(n);
        return b < 0 ? 0.0 : amp.segment(b * grid->n_q, grid->n_q).squaredNorm();
    }
};

/// Same physical wavepackets as initial_state() on the position grid,
/// written directly in momentum space (Gaussian of variance m hbar w / 2).
inline BandState band_initial_state(const InitialStateSpec& spec, const PhysicalParams& params,
                                    BandGridPtr grid) {
    const ScaledParams s = nondimensionalize(params);
    const double offset = spec.momentum_offset / s.momentum_unit;
    const double rel = spec.relative_phase();
    BandState st{grid, Eigen::VectorXcd(grid->size()), 0.0};
    auto packet = [&](double p, double centre) { return std::exp(-(p - centre) * (p - centre) / s.trap_freq); };
    for (int i = 0; i < grid->size(); ++i) {
        const double p = grid->p(i);
        if (spec.kind == InitialKind::momentum_kick)
            st.amp[i] = packet(p, -1.0 + offset);
        else
            st.amp[i] = (packet(p, -1.0 + offset) + std::exp(I * rel) * packet(p, 1.0 + offset)) / std::sqrt(2.0);
    }
    st.amp /= st.amp.norm();
    return st;
}

/// Population in the outer eighth of a band at either end of the concatenated
/// axis, i.e. next to the periodic wrap that closes the truncated model.
inline double wrap_weight(const BandState& s) {
    const BandGrid& g = *s.grid;
    const int edge = std::max(1, g.n_q / 8);
    double w = 0.0;
    for (int i = 0; i < edge; ++i) w += std::norm(s.amp[i]) + std::norm(s.amp[g.size() - 1 - i]);
    return w / s.norm();
}

struct ProjectionResult {
    BandState state;
    double discarded_weight;
};

/// Relabels grid momentum amplitudes into (q, n_b) bins. The band grid uses
/// the grid's own momentum spacing so the relabeling is exact.
inline ProjectionResult project_grid_to_bands(const GridState& s, int n_bands = 2,
                                              double max_discarded = 1e-3) {
    const Grid& g = *s.grid;
    auto bands = make_band_grid(n_bands, g.lattice_periods);
    const Eigen::VectorXcd phi = to_momentum(s);
    const double total = phi.squaredNorm();
    BandState out{bands, Eigen::VectorXcd(bands->size()), s.time};
    const int first = static_cast<int>(std::lround(bands->p(0) / g.dp_scaled));
    for (int i = 0; i < bands->size(); ++i) {
        const int j = first + i;
        if (std::abs(j) >= g.n_points / 2)
            throw std::invalid_argument("grid momentum range is narrower than the requested bands");
        out.amp[i] = phi[g.slot(j)];
    }
    const double kept = out.amp.squaredNorm();
    const double discarded = std::max(0.0, (total - kept) / total);
    if (discarded > max_discarded) {
        std::ostringstream os;
        os << "band projection discards " << discarded << " of the population (limit " << max_discarded
           << "): " << n_bands << "-band approximation breaks down";
        throw BandBreakdownError(os.str(), discarded);
    }
    return {std::move(out), discarded};
}

/// Propagator for band states; two bands give the periodic quantum Rabi model.
class BandPropagator {
public:
    static constexpr double norm_tolerance = 1e-8;
    static constexpr long check_interval = 256;

    BandPropagator(BandGridPtr grid, const PhysicalParams& params)
        : grid_(std::move(grid)), scaled_(nondimensionalize(params)) {
        const BandGrid& g = *grid_;
        const int nb = g.n_bands;
        const double c = 0.25 * scaled_.lattice_depth;
        if (nb > 2) {
            eigvals_.resize(g.n_q);
            eigvecs_.resize(g.n_q);
            for (int j = 0; j < g.n_q; ++j) {
                Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nb, nb);
                for (int b = 0; b < nb; ++b) {
                    const double p = g.p(b * g.n_q + j);
                    h(b, b) = p * p;
                    if (b + 1 < nb) h(b, b + 1) = h(b + 1, b) = c;
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
                eigvals_[j] = es.eigenvalues();
                eigvecs_[j] = es.eigenvectors();
            }
        }
    }

    const BandGrid& grid() const { return *grid_; }
    const ScaledParams& scaled() const { return scaled_; }

    BandState propagate(const BandState& state, double dt, long n_steps) const {
        if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
        if (n_steps < 0) throw std::invalid_argument("step count must be non-negative");
        if (state.grid != grid_) throw std::invalid_argument("state lives on a different band grid");
        BandState out = state;
        if (n_steps == 0) return out;

        const double tau = scaled_.from_time(dt);
        const auto half_a = local_unitaries(0.5 * tau);
        const auto full_a = local_unitaries(tau);
        Eigen::VectorXcd harmonic(grid_->size());
        const double w2 = 0.25 * scaled_.trap_freq * scaled_.trap_freq;
        for (int i = 0; i < grid_->size(); ++i) harmonic[i] = std::exp(-I * w2 * grid_->x[i] * grid_->x[i] * tau);
        const double inv_m = 1.0 / grid_->size();
        const double norm0 = state.norm();

        Eigen::VectorXcd& amp = out.amp;
        Eigen::VectorXcd xs(grid_->size());
        apply_local(amp, half_a);
        for (long s = 0; s < n_steps; ++s) {
            grid_->fft->backward(amp, xs);
            xs = xs.cwiseProduct(harmonic);
            grid_->fft->forward(xs, amp);
            amp *= inv_m;
            apply_local(amp, s + 1 < n_steps ? full_a : half_a);
            if ((s + 1) % check_interval == 0 || s + 1 == n_steps)
                out.max_edge_weight = std::max(out.max_edge_weight, wrap_weight(out));
        }
        out.time = state.time + n_steps * dt;
        const double drift = std::abs(out.norm() - norm0);
        if (drift > norm_tolerance) {
            std::ostringstream os;
            os << "band propagation norm drift " << drift << " exceeds " << norm_tolerance;
            throw NumericalError(os.str());
        }
        return out;
    }

private:
    // Per-q unitaries, row-major blocks of n_bands x n_bands.
    std::vector<Eigen::MatrixXcd> local_unitaries(double tau) const {
        const BandGrid& g = *grid_;
        const int nb = g.n_bands;
        std::vector<Eigen::MatrixXcd> u(g.n_q, Eigen::MatrixXcd(nb, nb));
        const double c = 0.25 * scaled_.lattice_depth;
        for (int j = 0; j < g.n_q; ++j) {
            if (nb == 2) {
                const double pa = g.p(j), pb = g.p(g.n_q + j);
                const double a = pa * pa, b = pb * pb;
                const double mean = 0.5 * (a + b), d = 0.5 * (a - b);
                const double omega = std::hypot(d, c);
                const double sinc = omega > 0.0 ? std::sin(omega * tau) / omega : tau;
                const cplx ph = std::exp(-I * mean * tau);
                const double cs = std::cos(omega * tau);
                u[j](0, 0) = ph * (cs - I * d * sinc);
                u[j](1, 1) = ph * (cs + I * d * sinc);
                u[j](0, 1) = u[j](1, 0) = ph * (-I * c * sinc);
            } else {
                Eigen::VectorXcd ph(nb);
                for (int k = 0; k < nb; ++k) ph[k] = std::exp(-I * eigvals_[j][k] * tau);
                const Eigen::MatrixXcd v = eigvecs_[j].cast<cplx>();
                u[j] = v * ph.asDiagonal() * v.transpose();
            }
        }
        return u;
    }

    void apply_local(Eigen::VectorXcd& amp, const std::vector<Eigen::MatrixXcd>& u) const {
        const BandGrid& g = *grid_;
        const int nb = g.n_bands;
        if (nb == 2) {
            for (int j = 0; j < g.n_q; ++j) {
                const cplx a = amp[j], b = amp[g.n_q + j];
                amp[j] = u[j](0, 0) * a + u[j](0, 1) * b;
                amp[g.n_q + j] = u[j](1, 0) * a + u[j](1, 1) * b;
            }
            return;
        }
        Eigen::VectorXcd v(nb), w(nb);
        for (int j = 0; j < g.n_q; ++j) {
            for (int b = 0; b < nb; ++b) v[b] = amp[b * g.n_q + j];
            w.noalias() = u[j] * v;
            for (int b = 0; b < nb; ++b) amp[b * g.n_q + j] = w[b];
        }
    }

    BandGridPtr grid_;
    ScaledParams scaled_;
    std::vector<Eigen::VectorXd> eigvals_;
    std::vector<Eigen::MatrixXd> eigvecs_;
};

inline BandState pqrm_propagate(const BandState& state, const PhysicalParams& params, double dt, long n_steps) {
    if (state.grid->n_bands != 2) throw std::invalid_argument("pqrm_propagate expects a two-band state");
    return BandPropagator(state.grid, params).propagate(state, dt, n_steps);
}

inline BandState multiband_propagate(const BandState& state, const PhysicalParams& params, double dt,
                                     long n_steps) {
    return BandPropagator(state.grid, params).propagate(state, dt, n_steps);
}

/// Applies the Raman beamsplitter to every (n_b = 1, q) / (n_b = 0, q) pair.
inline BandState apply_raman_pulse(const BandState& state, const PulseSpec& pulse) {
    validate_pulse(pulse);
    const BandGrid& g = *state.grid;
    BandState out = state;
    const int b0 = g.block_of_band(0), b1 = g.block_of_band(1);
    for (int j = 0; j < g.n_q; ++j) raman_pair(out.amp[b1 * g.n_q + j], out.amp[b0 * g.n_q + j], pulse);
    return out;
}

}  // namespace pqrm
