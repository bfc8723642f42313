// csv.hpp: fixed-schema CSV output for observable series and sweeps

#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pqrm/errors.hpp"
#include "pqrm/observables.hpp"
#include "pqrm/scenario.hpp"

namespace pqrm {

inline constexpr const char* csv_header =
    "model,time_s,ex_number,mean_x_m,mean_p_si,mean_q_si,sigma_x,readout,overlap,omega_q_hz";

/// One parsed CSV row. sigma_x is the band occupation <sigma_x>.
struct CsvRow {
    Model model = Model::pqrm;
    double time = 0.0;
    std::optional<double> ex_number, mean_x, mean_p, mean_q, sigma_x, readout, overlap;
    double omega_q_hz = 0.0;
};

namespace detail {

inline std::string csv_number(double v, int precision) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline std::string csv_optional(const std::optional<double>& v, int precision) {
    return v ? csv_number(*v, precision) : std::string();
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ScenarioResult& res, int precision = 12) {
    os << csv_header << "\n";
    for (const auto& s : res.series) {
        for (const auto& r : s.records) {
            os << to_string(s.model) << ',' << detail::csv_number(r.time, precision) << ','
               << detail::csv_number(r.excitation_number, precision) << ','
               << detail::csv_number(r.mean_x, precision) << ',' << detail::csv_number(r.mean_p, precision) << ','
               << detail::csv_number(r.mean_q, precision) << ','
               << detail::csv_number(r.band_occupation, precision) << ','
               << detail::csv_optional(r.readout, precision) << ',' << detail::csv_optional(r.overlap, precision)
               << ',' << detail::csv_number(s.qubit_split_hz, precision) << "\n";
        }
    }
}

/// Sweep rows carry N_e - N_g in the ex_number column; other observables are empty.
inline void write_csv(std::ostream& os, const SweepResult& res, int precision = 12) {
    os << csv_header << "\n";
    for (Eigen::Index w = 0; w < res.values.rows(); ++w) {
        for (Eigen::Index k = 0; k < res.values.cols(); ++k) {
            os << to_string(res.model) << ',' << detail::csv_number(res.times[k], precision) << ','
               << detail::csv_number(res.values(w, k), precision) << ",,,,,,,"
               << detail::csv_number(res.qubit_splits_hz[w], precision) << "\n";
        }
    }
}

template <class Result>
void write_csv_file(const std::string& path, const Result& res, int precision = 12) {
    std::ostringstream os;
    write_csv(os, res, precision);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << os.str();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::vector<CsvRow> read_csv(std::istream& in, const std::string& origin = "<csv>") {
    std::string line;
    if (!std::getline(in, line)) throw CsvError(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw CsvError(origin + ":1: unexpected header '" + line + "'");
    std::vector<CsvRow> rows;
    int n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        const std::string at = origin + ":" + std::to_string(n);
        if (f.size() != 10) throw CsvError(at + ": expected 10 fields, got " + std::to_string(f.size()));
        auto number = [&](const std::string& s, const char* col) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw CsvError(at + ": column " + col + ": not a number '" + s + "'");
            return v;
        };
        auto required = [&](const std::string& s, const char* col) {
            auto v = number(s, col);
            if (!v) throw CsvError(at + ": column " + col + " is empty");
            return *v;
        };
        CsvRow r;
        auto m = parse_model(f[0]);
        if (!m) throw CsvError(at + ": unknown model '" + f[0] + "'");
        r.model = *m;
        r.time = required(f[1], "time_s");
        r.ex_number = number(f[2], "ex_number");
        r.mean_x = number(f[3], "mean_x_m");
        r.mean_p = number(f[4], "mean_p_si");
        r.mean_q = number(f[5], "mean_q_si");
        r.sigma_x = number(f[6], "sigma_x");
        r.readout = number(f[7], "readout");
        r.overlap = number(f[8], "overlap");
        r.omega_q_hz = required(f[9], "omega_q_hz");
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<CsvRow> read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open '" + path + "'");
    return read_csv(in, path);
}

}  // namespace pqrm
