// pqrm: command-line front end: params, run, sweep, fluxonium, plot
//
// exit codes: 0 ok, 2 configuration error, 3 numerically invalid run, 1 anything else

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pqrm/pqrm.hpp"

namespace {

using namespace pqrm;

constexpr int exit_ok = 0;
constexpr int exit_other = 1;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct Options {
    std::string config;
    std::string out;
    unsigned threads = 1;
    std::vector<std::string> overrides;
    // plot
    std::string csv;
    std::string style = "auto";
    std::string quantity;
    double trap_freq_hz = 0.0;
};

RunConfig load(const Options& o) {
    if (o.config.empty()) throw ConfigError("--config is required");
    return load_config(o.config, o.overrides);
}

void print_row(const char* name, double value, const char* unit) {
    std::printf("%-22s %.6g %s\n", name, value, unit);
}

void print_fluxonium(const FluxoniumSection& f) {
    FluxoniumMapping m{};
    try {
        m = fluxonium_map(fluxonium_params(f));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[fluxonium] ") + e.what());
    }
    std::printf("fluxonium (E_C, E_J, E_L)/h = (%.6g, %.6g, %.6g) Hz\n", f.e_c_hz, f.e_j_hz, f.e_l_hz);
    print_row("  omega/2pi", rad_to_hz(m.trap_freq), "Hz");
    print_row("  omega_q/2pi", rad_to_hz(m.qubit_split), "Hz");
    print_row("  g/2pi", rad_to_hz(m.coupling), "Hz");
    print_row("  g/omega", m.coupling / m.trap_freq, "");
    print_row("  omega_q/omega", m.qubit_split / m.trap_freq, "");
}

int cmd_params(const Options& o) {
    const RunConfig c = load(o);
    const PhysicalParams p = physical_params(c);
    const auto d = derive(p);
    print_row("g/omega", d.coupling_ratio, "");
    print_row("omega_q/omega", d.qubit_ratio, "");
    print_row("T = 2pi/omega", d.trap_period, "s");
    print_row("E_r", d.recoil_energy, "J");
    print_row("E_r/h", d.recoil_energy / (constants::two_pi * constants::hbar), "Hz");
    print_row("g/2pi", rad_to_hz(d.coupling), "Hz");
    print_row("V (lattice depth)", p.lattice_depth(), "J");
    if (c.fluxonium) print_fluxonium(*c.fluxonium);
    return exit_ok;
}

/// Atom with the same mass as the config whose mapping reproduces the circuit.
PhysicalParams equivalent_atom(const RunConfig& c, const FluxoniumParams& f) {
    const auto m = fluxonium_map(f);
    const double mass = c.mass_u * constants::atomic_mass_unit;
    const double k = std::sqrt(f.E_C * mass / (2.0 * constants::hbar));
    return {mass, constants::two_pi / k, m.trap_freq, m.qubit_split};
}

int cmd_fluxonium(const Options& o) {
    const RunConfig c = load(o);
    if (!c.fluxonium) throw ConfigError(o.config + ": no [fluxonium] section");
    print_fluxonium(*c.fluxonium);
    const auto f = fluxonium_params(*c.fluxonium);
    const auto back = atomic_to_fluxonium(equivalent_atom(c, f));
    const double err = std::max({std::abs(back.E_C / f.E_C - 1.0), std::abs(back.E_J / f.E_J - 1.0),
                                 std::abs(back.E_L / f.E_L - 1.0)});
    print_row("  round trip rel. err", err, "");
    return exit_ok;
}

std::string csv_target(const Options& o, const RunConfig& c) {
    std::string path = o.out.empty() ? c.csv_path : o.out;
    if (path.empty()) throw ConfigError("no output path: set output.csv_path or pass --out");
    return path;
}

void write_provenance(const std::string& csv_path, const Provenance& prov, const RunConfig& c) {
    nlohmann::ordered_json j;
    j["config_hash"] = prov.config_hash;
    j["version"] = prov.version;
    j["started_at"] = prov.started_at;
    j["finished_at"] = prov.finished_at;
    j["scenario"] = std::string(to_string(c.id));
    j["config"] = serialize_config(c);
    std::ofstream out(csv_path + ".provenance.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + csv_path + ".provenance.json'");
    out << j.dump(2) << "\n";
}

void maybe_plot(const RunConfig& c, const std::string& csv_path) {
    if (c.svg_path.empty()) return;
    const PlotSpec spec = plot_spec_for(c.id, derive(physical_params(c)).trap_period);
    plot_csv_file(csv_path, c.svg_path, spec);
    std::fprintf(stderr, "wrote %s\n", c.svg_path.c_str());
}

int cmd_sweep(const Options& o) {
    const RunConfig c = load(o);
    const std::string path = csv_target(o, c);
    const SweepResult res = excitation_difference(to_scenario(c), o.threads, config_hash(c));
    write_csv_file(path, res, c.precision);
    write_provenance(path, res.provenance, c);
    std::fprintf(stderr, "wrote %s (%zu x %zu)\n", path.c_str(), res.qubit_splits_hz.size(), res.times.size());
    maybe_plot(c, path);
    return exit_ok;
}

int cmd_run(const Options& o) {
    const RunConfig c = load(o);
    if (c.id == ScenarioId::excitation_difference) return cmd_sweep(o);
    const std::string path = csv_target(o, c);
    const ScenarioResult res = run_scenario(to_scenario(c), o.threads, config_hash(c));
    write_csv_file(path, res, c.precision);
    write_provenance(path, res.provenance, c);
    for (const auto& s : res.series)
        if (s.band_edge_weight > 1e-3)
            std::fprintf(stderr, "warning: %s at %g Hz put %.3g of its weight next to the quasimomentum wrap\n",
                         std::string(to_string(s.model)).c_str(), s.qubit_split_hz, s.band_edge_weight);
    std::fprintf(stderr, "wrote %s (%zu series)\n", path.c_str(), res.series.size());
    maybe_plot(c, path);
    return exit_ok;
}

int cmd_plot(const Options& o) {
    if (o.out.empty()) throw ConfigError("plot: --out is required");
    PlotSpec spec;
    if (!o.config.empty()) {
        const RunConfig c = load(o);
        spec = plot_spec_for(c.id, derive(physical_params(c)).trap_period);
    }
    if (o.trap_freq_hz > 0.0) spec.period = 1.0 / o.trap_freq_hz;
    if (o.style == "panels") spec.style = PlotStyle::panels;
    else if (o.style == "colormap") spec.style = PlotStyle::colormap;
    else if (o.style == "phase_space") spec.style = PlotStyle::phase_space;
    else if (o.style != "auto") throw ConfigError("plot: unknown --style '" + o.style + "'");
    if (!o.quantity.empty()) {
        static const std::pair<const char*, PlotQuantity> names[] = {
            {"ex_number", PlotQuantity::ex_number}, {"sigma_x", PlotQuantity::sigma_x},
            {"readout", PlotQuantity::readout},     {"overlap", PlotQuantity::overlap},
            {"revival", PlotQuantity::revival},     {"mean_x", PlotQuantity::mean_x},
            {"mean_q", PlotQuantity::mean_q}};
        bool found = false;
        for (const auto& [n, q] : names)
            if (o.quantity == n) spec.quantity = q, found = true;
        if (!found) throw ConfigError("plot: unknown --quantity '" + o.quantity + "'");
    }
    plot_csv_file(o.csv, o.out, spec);
    std::fprintf(stderr, "wrote %s\n", o.out.c_str());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic quantum Rabi model simulator"};
    app.set_version_flag("--version", std::string(PQRM_VERSION));
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", o.config, "run configuration file");
        if (config_required) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--override", o.overrides, "section.key=value, repeatable")->take_all();
    };

    auto* params = app.add_subcommand("params", "print derived parameters");
    add_common(params, true);
    auto* flux = app.add_subcommand("fluxonium", "print the fluxonium circuit mapping");
    add_common(flux, true);
    auto* run = app.add_subcommand("run", "run a scenario and write CSV");
    add_common(run, true);
    run->add_option("--out", o.out, "CSV path (overrides output.csv_path)");
    run->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    auto* sweep = app.add_subcommand("sweep", "excitation difference over the qubit-splitting list");
    add_common(sweep, true);
    sweep->add_option("--out", o.out, "CSV path (overrides output.csv_path)");
    sweep->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    auto* plot = app.add_subcommand("plot", "render a CSV as SVG");
    plot->add_option("csv", o.csv, "input CSV")->required();
    plot->add_option("--out", o.out, "SVG path")->required();
    add_common(plot, false);
    plot->add_option("--style", o.style, "auto | panels | colormap | phase_space");
    plot->add_option("--quantity", o.quantity,
                     "ex_number | sigma_x | readout | overlap | revival | mean_x | mean_q");
    plot->add_option("--trap-freq-hz", o.trap_freq_hz, "time axis in trap periods");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        if (*params) return cmd_params(o);
        if (*flux) return cmd_fluxonium(o);
        if (*run) return cmd_run(o);
        if (*sweep) return cmd_sweep(o);
        if (*plot) return cmd_plot(o);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_other;
    }
    return exit_other;
}
