// scenario.hpp: config-driven time scans, qubit-splitting sweeps and
// momentum-spread averaging over the four models

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "pqrm/band_models.hpp"
#include "pqrm/errors.hpp"
#include "pqrm/grid.hpp"
#include "pqrm/observables.hpp"
#include "pqrm/params.hpp"
#include "pqrm/qrm.hpp"

#ifndef PQRM_VERSION
#define PQRM_VERSION "unknown"
#endif

namespace pqrm {

enum class ScenarioId { excitation_number, band_occupation, phase_space, collapse_revival, excitation_difference };

inline std::string_view to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::excitation_number: return "excitation_number";
        case ScenarioId::band_occupation: return "band_occupation";
        case ScenarioId::phase_space: return "phase_space";
        case ScenarioId::collapse_revival: return "collapse_revival";
        case ScenarioId::excitation_difference: return "excitation_difference";
    }
    return "?";
}

inline std::optional<ScenarioId> parse_scenario_id(std::string_view s) {
    for (auto id : {ScenarioId::excitation_number, ScenarioId::band_occupation, ScenarioId::phase_space,
                    ScenarioId::collapse_revival, ScenarioId::excitation_difference})
        if (s == to_string(id)) return id;
    return std::nullopt;
}

inline std::string_view to_string(InitialKind k) {
    switch (k) {
        case InitialKind::momentum_kick: return "momentum_kick";
        case InitialKind::qubit_g: return "qubit_g";
        case InitialKind::qubit_e: return "qubit_e";
        case InitialKind::custom: return "custom";
    }
    return "?";
}

inline std::optional<InitialKind> parse_initial_kind(std::string_view s) {
    for (auto k : {InitialKind::momentum_kick, InitialKind::qubit_g, InitialKind::qubit_e, InitialKind::custom})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

struct ScenarioConfig {
    ScenarioId id = ScenarioId::excitation_number;
    PhysicalParams params = PhysicalParams::rubidium87(346.0);
    std::vector<Model> models{Model::pqrm};

    double t_start_periods = 0.0;  // in units of T = 2 pi / w
    double t_end_periods = 2.2;
    int n_samples = 200;

    InitialKind initial = InitialKind::momentum_kick;
    double initial_phase = 0.0;  // rad, custom kind only

    std::vector<double> qubit_splits_hz;  // empty: the splitting held in params

    double spread_hbar_k = 0.0;  // Gaussian sigma_p of the initial momentum, units of hbar k
    int quadrature_nodes = 7;

    int grid_points = 4096;
    double grid_length = 80e-6;  // m
    double grid_dt = 100e-9;     // s

    int n_bands = 6;             // multiband model only
    int n_q = 0;                 // 0: match the grid's momentum spacing
    double band_dt = 100e-9;     // s

    int n_max = 600;

    PulseSpec pulse{};

    bool operator==(const ScenarioConfig&) const = default;
};

inline std::vector<double> qubit_splits_hz(const ScenarioConfig& c) {
    if (!c.qubit_splits_hz.empty()) return c.qubit_splits_hz;
    return {rad_to_hz(c.params.qubit_split())};
}

inline void validate(const ScenarioConfig& c, int min_samples = 2) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (c.models.empty()) fail("scenario.models: at least one model is required");
    if (c.n_samples < min_samples)
        fail("scenario.n_samples: need at least " + std::to_string(min_samples) + " time samples");
    if (!(c.t_start_periods >= 0.0)) fail("scenario.t_start_periods must be non-negative");
    if (c.n_samples > 1 && !(c.t_end_periods > c.t_start_periods)) fail("scenario: empty time span");
    if (c.n_samples == 1 && !(c.t_end_periods >= c.t_start_periods)) fail("scenario: empty time span");
    if (c.quadrature_nodes < 1) fail("scenario.quadrature_nodes must be at least 1");
    if (!(c.spread_hbar_k >= 0.0)) fail("scenario.momentum_spread_hbar_k must be non-negative");
    if (!(c.grid_dt > 0.0) || !(c.band_dt > 0.0)) fail("time steps must be positive");
    if (!is_power_of_two(c.grid_points)) fail("grid.n_points must be a power of two");
    if (!(c.grid_length > 0.0)) fail("grid.length_um must be positive");
    if (c.n_bands < 2) fail("bands.n_bands must be at least 2");
    if (c.n_q != 0 && c.n_q < 4) fail("bands.n_q must be 0 or at least 4");
    if (c.n_max < 1) fail("qrm.n_max must be at least 1");
    for (double w : c.qubit_splits_hz)
        if (!(w >= 0.0)) fail("scenario.qubit_split_hz_list entries must be non-negative");
    if (!(c.pulse.area >= 0.0 && c.pulse.area <= 2.0 * std::numbers::pi))
        fail("scenario.pulse_area_rad must lie in [0, 2 pi]");
}

/// Sample times in seconds, evenly spaced over [t_start, t_end].
inline std::vector<double> sample_times(const ScenarioConfig& c) {
    const double period = derive(c.params).trap_period;
    std::vector<double> t(c.n_samples);
    if (c.n_samples == 1) {
        t[0] = c.t_start_periods * period;
        return t;
    }
    const double step = (c.t_end_periods - c.t_start_periods) / (c.n_samples - 1);
    for (int i = 0; i < c.n_samples; ++i) t[i] = (c.t_start_periods + i * step) * period;
    return t;
}

struct QuadratureRule {
    std::vector<double> nodes;    // standard normal abscissae
    std::vector<double> weights;  // sum to 1
};

/// Gauss-Hermite rule for E[f(z)], z ~ N(0, 1), by Golub-Welsch.
inline QuadratureRule gauss_hermite(int k) {
    if (k < 1) throw ConfigError("quadrature order must be at least 1");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k, k);
    for (int i = 1; i < k; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(i / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    QuadratureRule r;
    for (int i = 0; i < k; ++i) {
        // physicists' nodes h_i -> z = sqrt2 h_i
        double h = es.eigenvalues()[i];
        if (k % 2 == 1 && i == k / 2) h = 0.0;
        r.nodes.push_back(std::sqrt(2.0) * h);
        r.weights.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
    }
    // symmetrise so that +z and -z carry bit-identical weights
    for (int i = 0; i < k / 2; ++i) {
        const double z = 0.5 * (r.nodes[k - 1 - i] - r.nodes[i]);
        const double w = 0.5 * (r.weights[i] + r.weights[k - 1 - i]);
        r.nodes[i] = -z;
        r.nodes[k - 1 - i] = z;
        r.weights[i] = r.weights[k - 1 - i] = w;
    }
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    for (double& w : r.weights) w /= sum;
    return r;
}

struct ObservableSeries {
    Model model = Model::pqrm;
    double qubit_split_hz = 0.0;
    std::vector<ObservableRecord> records;
    double band_edge_weight = 0.0;  // band models: largest population seen next to the axis wrap
};

struct Provenance {
    std::string config_hash;  // FNV-1a 64 of the canonical config text
    std::string version = PQRM_VERSION;
    std::string started_at, finished_at;  // UTC, ISO 8601
};

struct ScenarioResult {
    std::vector<ObservableSeries> series;  // ordered by (qubit splitting, model)
    Provenance provenance;
};

struct SweepResult {
    Model model = Model::pqrm;
    std::vector<double> times;           // s
    std::vector<double> qubit_splits_hz;
    Eigen::MatrixXd values;              // rows: qubit splitting, cols: time; N_e - N_g
    Provenance provenance;
};

namespace detail {

inline std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// Runs body(i) for i in [0, n) on a bounded pool. Results must be written
/// by index; the lowest-index failure is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline long steps_for(double span, double dt_max) {
    if (span <= 0.0) return 0;
    return std::max(1L, static_cast<long>(std::ceil(span / dt_max * (1.0 - 1e-12))));
}

inline std::string where(Model m, double t, double wq_hz) {
    std::ostringstream os;
    os << "[model=" << to_string(m) << " t=" << t << " s omega_q/2pi=" << wq_hz << " Hz]";
    return os.str();
}

/// One trajectory of one model at fixed parameters.
inline ObservableSeries trajectory(const ScenarioConfig& c, Model model, const PhysicalParams& params,
                                   const InitialStateSpec& spec, const std::vector<double>& times) {
    ObservableSeries out;
    out.model = model;
    out.qubit_split_hz = rad_to_hz(params.qubit_split());
    out.records.reserve(times.size());
    double t_now = 0.0;
    try {
        switch (model) {
            case Model::grid: {
                auto grid = make_grid(params, c.grid_points, c.grid_length);
                GridPropagator prop(grid, params);
                GridState s = initial_state(spec, params, grid);
                for (double t : times) {
                    const long n = steps_for(t - s.time, c.grid_dt);
                    if (n > 0) s = prop.propagate(s, (t - s.time) / n, n);
                    t_now = t;
                    out.records.push_back(observe(s, params, c.pulse));
                }
                break;
            }
            case Model::pqrm:
            case Model::multiband: {
                int n_q = c.n_q;
                if (n_q == 0) n_q = make_grid(params, c.grid_points, c.grid_length)->lattice_periods;
                auto bands = make_band_grid(model == Model::pqrm ? 2 : c.n_bands, n_q);
                BandPropagator prop(bands, params);
                BandState s = band_initial_state(spec, params, bands);
                for (double t : times) {
                    const long n = steps_for(t - s.time, c.band_dt);
                    if (n > 0) s = prop.propagate(s, (t - s.time) / n, n);
                    t_now = t;
                    ObservableRecord r = observe(s, params, c.pulse);
                    r.model = model;
                    out.records.push_back(r);
                }
                out.band_edge_weight = s.max_edge_weight;
                break;
            }
            case Model::qrm: {
                const auto states = evolve_qrm_series(spec, params, times, c.n_max);
                const FockState initial = fock_initial_state(spec, params, states.front().n_max);
                for (const auto& s : states) {
                    t_now = s.time;
                    out.records.push_back(observe(s, params, &initial));
                }
                break;
            }
        }
    } catch (const NumericalError& e) {
        throw e.with_context(where(model, t_now, out.qubit_split_hz));
    }
    return out;
}

/// Incoherent average of same-shaped series.
inline ObservableSeries average(const std::vector<ObservableSeries>& parts, const std::vector<double>& weights) {
    ObservableSeries out = parts.front();
    for (std::size_t k = 0; k < out.records.size(); ++k) {
        ObservableRecord r = parts.front().records[k];
        auto acc = [&](auto field) {
            double v = 0.0;
            for (std::size_t j = 0; j < parts.size(); ++j) v += weights[j] * (parts[j].records[k].*field);
            r.*field = v;
        };
        acc(&ObservableRecord::excitation_number);
        acc(&ObservableRecord::mean_x);
        acc(&ObservableRecord::mean_p);
        acc(&ObservableRecord::mean_q);
        acc(&ObservableRecord::var_x);
        acc(&ObservableRecord::var_q);
        acc(&ObservableRecord::band_occupation);
        auto acc_opt = [&](std::optional<double> ObservableRecord::*field) {
            if (!(parts.front().records[k].*field)) return;
            double v = 0.0;
            for (std::size_t j = 0; j < parts.size(); ++j) v += weights[j] * *(parts[j].records[k].*field);
            r.*field = v;
        };
        acc_opt(&ObservableRecord::readout);
        acc_opt(&ObservableRecord::overlap);
        out.records[k] = r;
    }
    for (const auto& p : parts) out.band_edge_weight = std::max(out.band_edge_weight, p.band_edge_weight);
    return out;
}

}  // namespace detail

/// Single model at fixed parameters, averaged over the configured momentum
/// spread; sigma_p = 0 runs exactly one trajectory.
inline ObservableSeries spread_average(const ScenarioConfig& c, Model model, const PhysicalParams& params,
                                       InitialStateSpec spec, const std::vector<double>& times) {
    if (c.quadrature_nodes < 1) throw ConfigError("scenario.quadrature_nodes must be at least 1");
    if (c.spread_hbar_k == 0.0) return detail::trajectory(c, model, params, spec, times);
    const double sigma = c.spread_hbar_k * constants::hbar * params.wavevector();
    const QuadratureRule rule = gauss_hermite(c.quadrature_nodes);
    const double base = spec.momentum_offset;
    std::vector<ObservableSeries> parts;
    for (double z : rule.nodes) {
        spec.momentum_offset = base + sigma * z;
        parts.push_back(detail::trajectory(c, model, params, spec, times));
    }
    return detail::average(parts, rule.weights);
}

inline InitialStateSpec initial_spec(const ScenarioConfig& c) {
    InitialStateSpec s;
    s.kind = c.initial;
    s.phase = c.initial_phase;
    return s;
}

inline PhysicalParams with_qubit_split_hz(PhysicalParams p, double hz) {
    p.set_qubit_split(hz_to_rad(hz));
    return p;
}

/// Every (qubit splitting, model) pair of the config, in that order.
inline ScenarioResult run_scenario(const ScenarioConfig& c, unsigned threads = 1,
                                   const std::string& config_hash = {}) {
    validate(c);
    ScenarioResult res;
    res.provenance.config_hash = config_hash;
    res.provenance.started_at = detail::utc_now();
    const auto times = sample_times(c);
    const auto splits = qubit_splits_hz(c);
    const std::size_t n_models = c.models.size();
    res.series.resize(splits.size() * n_models);
    detail::parallel_for(res.series.size(), threads, [&](std::size_t i) {
        const PhysicalParams p = with_qubit_split_hz(c.params, splits[i / n_models]);
        res.series[i] = spread_average(c, c.models[i % n_models], p, initial_spec(c), times);
    });
    res.provenance.finished_at = detail::utc_now();
    return res;
}

/// <N> for qubit_e minus <N> for qubit_g at every (qubit splitting, time),
/// using the first configured model.
inline SweepResult excitation_difference(const ScenarioConfig& c, unsigned threads = 1,
                                         const std::string& config_hash = {}) {
    validate(c, 1);
    SweepResult res;
    res.model = c.models.front();
    res.provenance.config_hash = config_hash;
    res.provenance.started_at = detail::utc_now();
    res.times = sample_times(c);
    res.qubit_splits_hz = qubit_splits_hz(c);
    const std::size_t n_w = res.qubit_splits_hz.size();
    std::vector<ObservableSeries> runs(2 * n_w);
    detail::parallel_for(runs.size(), threads, [&](std::size_t i) {
        const PhysicalParams p = with_qubit_split_hz(c.params, res.qubit_splits_hz[i / 2]);
        InitialStateSpec spec;
        spec.kind = i % 2 == 0 ? InitialKind::qubit_e : InitialKind::qubit_g;
        runs[i] = spread_average(c, res.model, p, spec, res.times);
    });
    res.values.resize(static_cast<Eigen::Index>(n_w), static_cast<Eigen::Index>(res.times.size()));
    for (std::size_t w = 0; w < n_w; ++w)
        for (std::size_t k = 0; k < res.times.size(); ++k)
            res.values(w, k) = runs[2 * w].records[k].excitation_number - runs[2 * w + 1].records[k].excitation_number;
    res.provenance.finished_at = detail::utc_now();
    return res;
}

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace pqrm
