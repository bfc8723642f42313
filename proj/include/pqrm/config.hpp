// config.hpp: sectioned key = value run configuration
//
//   # comment
//   [system]
//   trap_freq_hz = 346
//   [scenario]
//   id = excitation_number
//   qubit_split_hz_list = 0, 800, 1280
//
// Units are part of every key name. Unknown sections or keys are errors.
// Values are kept in the units of the file, so parse -> serialize -> parse
// reproduces the same RunConfig bit for bit.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pqrm/errors.hpp"
#include "pqrm/params.hpp"
#include "pqrm/scenario.hpp"

namespace pqrm {

struct FluxoniumSection {
    double e_c_hz = 0.0, e_j_hz = 0.0, e_l_hz = 0.0;  // energies / h
    double ext_flux_rad = std::numbers::pi;
    bool operator==(const FluxoniumSection&) const = default;
};

struct RunConfig {
    // [system]
    double mass_u = constants::rb87_mass_u;
    double wavelength_nm = 783.5;
    double trap_freq_hz = 346.0;
    double qubit_split_hz = 0.0;
    // [grid]
    int grid_points = 4096;
    double grid_length_um = 80.0;
    double grid_dt_ns = 100.0;
    // [bands]
    int n_bands = 6;
    int n_q = 0;
    double band_dt_ns = 100.0;
    // [qrm]
    int n_max = 600;
    // [scenario]
    ScenarioId id = ScenarioId::excitation_number;
    std::vector<Model> models{Model::pqrm};
    double t_start_periods = 0.0;
    double t_end_periods = 2.2;
    int n_samples = 200;
    InitialKind initial = InitialKind::momentum_kick;
    double initial_phase_rad = 0.0;
    std::vector<double> qubit_split_hz_list;
    double momentum_spread_hbar_k = 0.0;
    int quadrature_nodes = 7;
    double pulse_area_rad = std::numbers::pi / 2.0;
    double pulse_phase_rad = 0.0;
    // [output]
    std::string csv_path;
    std::string svg_path;
    int precision = 12;
    // [fluxonium]
    std::optional<FluxoniumSection> fluxonium;

    bool operator==(const RunConfig&) const = default;
};

/// Figure-protocol defaults for each scenario id.
inline RunConfig config_defaults(ScenarioId id) {
    RunConfig c;
    c.id = id;
    switch (id) {
        case ScenarioId::excitation_number:
            c.models = {Model::grid, Model::pqrm, Model::qrm};
            c.qubit_split_hz_list = {0.0, 800.0, 1280.0};
            break;
        case ScenarioId::band_occupation:
            c.models = {Model::grid, Model::pqrm};
            c.qubit_split_hz_list = {0.0, 1750.0};
            break;
        case ScenarioId::phase_space:
            c.models = {Model::grid, Model::pqrm};
            c.qubit_split_hz_list = {0.0, 1280.0};
            break;
        case ScenarioId::collapse_revival:
            c.trap_freq_hz = 650.0;
            c.models = {Model::pqrm, Model::qrm};
            c.initial = InitialKind::qubit_g;
            c.qubit_split_hz_list = {0.0, 1280.0};
            break;
        case ScenarioId::excitation_difference:
            c.trap_freq_hz = 350.0;
            c.models = {Model::pqrm};
            c.t_end_periods = 1.2;
            c.n_samples = 121;
            for (int i = 0; i <= 40; ++i) c.qubit_split_hz_list.push_back(50.0 * i);
            break;
    }
    return c;
}

inline PhysicalParams physical_params(const RunConfig& c) {
    try {
        return {c.mass_u * constants::atomic_mass_unit, c.wavelength_nm * 1e-9, hz_to_rad(c.trap_freq_hz),
                hz_to_rad(c.qubit_split_hz)};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[system] ") + e.what());
    }
}

inline ScenarioConfig to_scenario(const RunConfig& c) {
    ScenarioConfig s;
    s.id = c.id;
    s.params = physical_params(c);
    s.models = c.models;
    s.t_start_periods = c.t_start_periods;
    s.t_end_periods = c.t_end_periods;
    s.n_samples = c.n_samples;
    s.initial = c.initial;
    s.initial_phase = c.initial_phase_rad;
    s.qubit_splits_hz = c.qubit_split_hz_list;
    s.spread_hbar_k = c.momentum_spread_hbar_k;
    s.quadrature_nodes = c.quadrature_nodes;
    s.grid_points = c.grid_points;
    s.grid_length = c.grid_length_um * 1e-6;
    s.grid_dt = c.grid_dt_ns * 1e-9;
    s.n_bands = c.n_bands;
    s.n_q = c.n_q;
    s.band_dt = c.band_dt_ns * 1e-9;
    s.n_max = c.n_max;
    s.pulse = {c.pulse_area_rad, c.pulse_phase_rad};
    return s;
}

inline FluxoniumParams fluxonium_params(const FluxoniumSection& f) {
    return {hz_to_rad(f.e_c_hz), hz_to_rad(f.e_j_hz), hz_to_rad(f.e_l_hz), f.ext_flux_rad};
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Location {
    std::string origin;
    int line;
    std::string key;
};

[[noreturn]] inline void config_fail(const Location& at, const std::string& msg) {
    std::ostringstream os;
    os << at.origin << ":" << at.line << ": " << at.key << ": " << msg;
    throw ConfigError(os.str());
}

inline double to_double(const std::string& v, const Location& at) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) config_fail(at, "expected a number, got '" + v + "'");
    return out;
}

inline int to_int(const std::string& v, const Location& at) {
    int out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) config_fail(at, "expected an integer, got '" + v + "'");
    return out;
}

struct Entry {
    std::string section, key, value;
    Location at;
};

inline std::vector<Entry> tokenize(std::istream& in, const std::string& origin) {
    std::vector<Entry> out;
    std::string line, section;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') config_fail({origin, n, t}, "malformed section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) config_fail({origin, n, t}, "expected key = value");
        if (section.empty()) config_fail({origin, n, trim(t.substr(0, eq))}, "key outside any section");
        Entry e{section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), {origin, n, ""}};
        e.at.key = e.section + "." + e.key;
        out.push_back(std::move(e));
    }
    return out;
}

inline void apply(RunConfig& c, const Entry& e, bool& saw_split, bool& saw_depth) {
    const auto& v = e.value;
    const auto& at = e.at;
    auto num = [&] { return to_double(v, at); };
    auto integer = [&] { return to_int(v, at); };
    auto flux = [&]() -> FluxoniumSection& {
        if (!c.fluxonium) c.fluxonium = FluxoniumSection{};
        return *c.fluxonium;
    };
    const std::string k = e.section + "." + e.key;

    if (k == "system.mass_u") c.mass_u = num();
    else if (k == "system.wavelength_nm") c.wavelength_nm = num();
    else if (k == "system.trap_freq_hz") c.trap_freq_hz = num();
    else if (k == "system.qubit_split_hz") { c.qubit_split_hz = num(); saw_split = true; }
    else if (k == "system.lattice_depth_hz") { c.qubit_split_hz = 0.5 * num(); saw_depth = true; }  // V/h = 2 w_q/2pi
    else if (k == "grid.n_points") c.grid_points = integer();
    else if (k == "grid.length_um") c.grid_length_um = num();
    else if (k == "grid.dt_ns") c.grid_dt_ns = num();
    else if (k == "bands.n_bands") c.n_bands = integer();
    else if (k == "bands.n_q") c.n_q = integer();
    else if (k == "bands.dt_ns") c.band_dt_ns = num();
    else if (k == "qrm.n_max") c.n_max = integer();
    else if (k == "scenario.id") {
        // handled before the other keys
    } else if (k == "scenario.models") {
        c.models.clear();
        for (const auto& m : split_list(v)) {
            auto parsed = parse_model(m);
            if (!parsed) config_fail(at, "unknown model '" + m + "' (grid, pqrm, multiband, qrm)");
            c.models.push_back(*parsed);
        }
    } else if (k == "scenario.t_start_periods") c.t_start_periods = num();
    else if (k == "scenario.t_end_periods") c.t_end_periods = num();
    else if (k == "scenario.n_samples") c.n_samples = integer();
    else if (k == "scenario.initial_state") {
        auto parsed = parse_initial_kind(v);
        if (!parsed) config_fail(at, "unknown initial state '" + v + "'");
        c.initial = *parsed;
    } else if (k == "scenario.initial_phase_rad") c.initial_phase_rad = num();
    else if (k == "scenario.qubit_split_hz_list") {
        c.qubit_split_hz_list.clear();
        for (const auto& item : split_list(v)) c.qubit_split_hz_list.push_back(to_double(item, at));
    } else if (k == "scenario.qubit_split_hz_range") {
        const auto items = split_list(v);
        if (items.size() != 3) config_fail(at, "expected 'start, stop, count'");
        const double a = to_double(items[0], at), b = to_double(items[1], at);
        const int n = to_int(items[2], at);
        if (n < 1) config_fail(at, "count must be positive");
        c.qubit_split_hz_list.clear();
        for (int i = 0; i < n; ++i) c.qubit_split_hz_list.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else if (k == "scenario.momentum_spread_hbar_k") c.momentum_spread_hbar_k = num();
    else if (k == "scenario.quadrature_nodes") c.quadrature_nodes = integer();
    else if (k == "scenario.pulse_area_rad") c.pulse_area_rad = num();
    else if (k == "scenario.pulse_phase_rad") c.pulse_phase_rad = num();
    else if (k == "output.csv_path") c.csv_path = v;
    else if (k == "output.svg_path") c.svg_path = v;
    else if (k == "output.precision") c.precision = integer();
    else if (k == "fluxonium.e_c_hz") flux().e_c_hz = num();
    else if (k == "fluxonium.e_j_hz") flux().e_j_hz = num();
    else if (k == "fluxonium.e_l_hz") flux().e_l_hz = num();
    else if (k == "fluxonium.ext_flux_rad") flux().ext_flux_rad = num();
    else config_fail(at, "unknown key");
}

}  // namespace detail

/// Parses a config; `overrides` are "section.key=value" strings applied last.
inline RunConfig parse_config(std::istream& in, const std::string& origin = "<config>",
                              const std::vector<std::string>& overrides = {}) {
    auto entries = detail::tokenize(in, origin);
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        const std::string& o = overrides[i];
        const auto eq = o.find('=');
        const auto dot = o.find('.');
        detail::Location at{"--override", static_cast<int>(i + 1), o};
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            detail::config_fail(at, "expected section.key=value");
        detail::Entry e{detail::trim(o.substr(0, dot)), detail::trim(o.substr(dot + 1, eq - dot - 1)),
                        detail::trim(o.substr(eq + 1)), at};
        e.at.key = e.section + "." + e.key;
        entries.push_back(std::move(e));
    }

    ScenarioId id = ScenarioId::excitation_number;
    for (const auto& e : entries) {
        if (e.section == "scenario" && e.key == "id") {
            auto parsed = parse_scenario_id(e.value);
            if (!parsed) detail::config_fail(e.at, "unknown scenario id '" + e.value + "'");
            id = *parsed;
        }
    }
    RunConfig c = config_defaults(id);
    bool saw_split = false, saw_depth = false;
    for (const auto& e : entries) detail::apply(c, e, saw_split, saw_depth);
    if (saw_split && saw_depth) throw ConfigError(origin + ": give either system.qubit_split_hz or system.lattice_depth_hz");
    if (c.precision < 1 || c.precision > 17) throw ConfigError(origin + ": output.precision must lie in [1, 17]");
    if (c.fluxonium) {
        const auto& f = *c.fluxonium;
        if (!(f.e_c_hz > 0.0 && f.e_j_hz > 0.0 && f.e_l_hz > 0.0))
            throw ConfigError(origin + ": [fluxonium] needs positive e_c_hz, e_j_hz and e_l_hz");
    }
    physical_params(c);
    validate(to_scenario(c), c.id == ScenarioId::excitation_difference ? 1 : 2);
    return c;
}

inline RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {}) {
    std::istringstream in(text);
    return parse_config(in, "<config>", overrides);
}

inline RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path, overrides);
}

/// Canonical text: every key, fixed order, 17 significant digits.
inline std::string serialize_config(const RunConfig& c) {
    using detail::format_double;
    std::ostringstream os;
    os << "[system]\n"
       << "mass_u = " << format_double(c.mass_u) << "\n"
       << "wavelength_nm = " << format_double(c.wavelength_nm) << "\n"
       << "trap_freq_hz = " << format_double(c.trap_freq_hz) << "\n"
       << "qubit_split_hz = " << format_double(c.qubit_split_hz) << "\n\n"
       << "[grid]\n"
       << "n_points = " << c.grid_points << "\n"
       << "length_um = " << format_double(c.grid_length_um) << "\n"
       << "dt_ns = " << format_double(c.grid_dt_ns) << "\n\n"
       << "[bands]\n"
       << "n_bands = " << c.n_bands << "\n"
       << "n_q = " << c.n_q << "\n"
       << "dt_ns = " << format_double(c.band_dt_ns) << "\n\n"
       << "[qrm]\n"
       << "n_max = " << c.n_max << "\n\n"
       << "[scenario]\n"
       << "id = " << to_string(c.id) << "\n"
       << "models = ";
    for (std::size_t i = 0; i < c.models.size(); ++i) os << (i ? ", " : "") << to_string(c.models[i]);
    os << "\n"
       << "t_start_periods = " << format_double(c.t_start_periods) << "\n"
       << "t_end_periods = " << format_double(c.t_end_periods) << "\n"
       << "n_samples = " << c.n_samples << "\n"
       << "initial_state = " << to_string(c.initial) << "\n"
       << "initial_phase_rad = " << format_double(c.initial_phase_rad) << "\n"
       << "qubit_split_hz_list = ";
    for (std::size_t i = 0; i < c.qubit_split_hz_list.size(); ++i)
        os << (i ? ", " : "") << format_double(c.qubit_split_hz_list[i]);
    os << "\n"
       << "momentum_spread_hbar_k = " << format_double(c.momentum_spread_hbar_k) << "\n"
       << "quadrature_nodes = " << c.quadrature_nodes << "\n"
       << "pulse_area_rad = " << format_double(c.pulse_area_rad) << "\n"
       << "pulse_phase_rad = " << format_double(c.pulse_phase_rad) << "\n\n"
       << "[output]\n"
       << "csv_path = " << c.csv_path << "\n"
       << "svg_path = " << c.svg_path << "\n"
       << "precision = " << c.precision << "\n";
    if (c.fluxonium) {
        const auto& f = *c.fluxonium;
        os << "\n[fluxonium]\n"
           << "e_c_hz = " << format_double(f.e_c_hz) << "\n"
           << "e_j_hz = " << format_double(f.e_j_hz) << "\n"
           << "e_l_hz = " << format_double(f.e_l_hz) << "\n"
           << "ext_flux_rad = " << format_double(f.ext_flux_rad) << "\n";
    }
    return os.str();
}

/// Hash of the physics-relevant part of a config (output paths excluded).
inline std::string config_hash(const RunConfig& c) {
    RunConfig h = c;
    h.csv_path.clear();
    h.svg_path.clear();
    return fnv1a_hex(serialize_config(h));
}

}  // namespace pqrm
