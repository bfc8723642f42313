// svg.hpp: static SVG rendering of CSV series (stacked panels or a colour map)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pqrm/csv.hpp"
#include "pqrm/errors.hpp"

namespace pqrm {

enum class PlotStyle { automatic, panels, colormap, phase_space };

/// Which column to draw. `revival` takes the readout where present and the
/// QRM overlap otherwise.
enum class PlotQuantity { ex_number, sigma_x, readout, overlap, revival, mean_x, mean_q };

struct PlotSpec {
    PlotStyle style = PlotStyle::automatic;
    PlotQuantity quantity = PlotQuantity::ex_number;
    std::optional<double> period;  // s; time axis in units of 2 pi / w when set
    std::string title;
    int width = 720;
    int panel_height = 220;
};

inline PlotSpec plot_spec_for(ScenarioId id, double trap_period) {
    PlotSpec p;
    p.period = trap_period;
    switch (id) {
        case ScenarioId::excitation_number: p.quantity = PlotQuantity::ex_number; break;
        case ScenarioId::band_occupation: p.quantity = PlotQuantity::sigma_x; break;
        case ScenarioId::phase_space: p.style = PlotStyle::phase_space; break;
        case ScenarioId::collapse_revival: p.quantity = PlotQuantity::revival; break;
        case ScenarioId::excitation_difference: p.style = PlotStyle::colormap; break;
    }
    p.title = std::string(to_string(id));
    return p;
}

namespace detail {

inline std::string fmt(double v, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// About five round tick values covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
        t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

inline std::optional<double> pick(const CsvRow& r, PlotQuantity q) {
    switch (q) {
        case PlotQuantity::ex_number: return r.ex_number;
        case PlotQuantity::sigma_x: return r.sigma_x;
        case PlotQuantity::readout: return r.readout;
        case PlotQuantity::overlap: return r.overlap;
        case PlotQuantity::revival: return r.readout ? r.readout : r.overlap;
        case PlotQuantity::mean_x: return r.mean_x;
        case PlotQuantity::mean_q: return r.mean_q;
    }
    return std::nullopt;
}

inline const char* quantity_label(PlotQuantity q) {
    switch (q) {
        case PlotQuantity::ex_number: return "&lt;N&gt;";
        case PlotQuantity::sigma_x: return "&lt;&#963;x&gt;";
        case PlotQuantity::readout: return "n(p&lt;0)";
        case PlotQuantity::overlap: return "overlap";
        case PlotQuantity::revival: return "readout / overlap";
        case PlotQuantity::mean_x: return "&lt;x&gt; (m)";
        case PlotQuantity::mean_q: return "&lt;q&gt; (kg m/s)";
    }
    return "";
}

inline const char* model_colour(Model m) {
    switch (m) {
        case Model::grid: return "#444444";
        case Model::pqrm: return "#1f5fbf";
        case Model::multiband: return "#2a9d4b";
        case Model::qrm: return "#c0392b";
    }
    return "#000000";
}

struct Frame {
    double x0, y0, w, h;     // pixel box
    double xmin, xmax, ymin, ymax;
    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

inline void pad_range(double& lo, double& hi) {
    if (!(hi > lo)) {
        const double d = std::max(1.0, std::abs(lo)) * 0.5;
        lo -= d;
        hi += d;
        return;
    }
    const double d = 0.05 * (hi - lo);
    lo -= d;
    hi += d;
}

inline void draw_axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel,
                      bool x_ticks_labels = true) {
    os << "<rect x=\"" << fmt(f.x0) << "\" y=\"" << fmt(f.y0) << "\" width=\"" << fmt(f.w) << "\" height=\""
       << fmt(f.h) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (double t : nice_ticks(f.xmin, f.xmax)) {
        const double x = f.px(t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(f.y0 + f.h) << "\" x2=\"" << fmt(x) << "\" y2=\""
           << fmt(f.y0 + f.h - 5) << "\" stroke=\"#000\"/>\n";
        if (x_ticks_labels)
            os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(f.y0 + f.h + 16)
               << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : nice_ticks(f.ymin, f.ymax)) {
        const double y = f.py(t);
        os << "<line x1=\"" << fmt(f.x0) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(f.x0 + 5) << "\" y2=\""
           << fmt(y) << "\" stroke=\"#000\"/>\n"
           << "<text x=\"" << fmt(f.x0 - 6) << "\" y=\"" << fmt(y + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    if (!xlabel.empty())
        os << "<text x=\"" << fmt(f.x0 + f.w / 2) << "\" y=\"" << fmt(f.y0 + f.h + 34)
           << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    os << "<text transform=\"translate(" << fmt(f.x0 - 48) << "," << fmt(f.y0 + f.h / 2)
       << ") rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">" << ylabel << "</text>\n";
}

inline std::vector<double> distinct_splits(const std::vector<CsvRow>& rows) {
    std::vector<double> out;
    for (const auto& r : rows)
        if (std::find(out.begin(), out.end(), r.omega_q_hz) == out.end()) out.push_back(r.omega_q_hz);
    return out;
}

inline void series_path(std::ostringstream& os, const Frame& f, const std::vector<std::pair<double, double>>& pts,
                        Model m) {
    if (m == Model::grid) {
        for (const auto& [x, y] : pts)
            os << "<circle cx=\"" << fmt(f.px(x), 6) << "\" cy=\"" << fmt(f.py(y), 6)
               << "\" r=\"2\" fill=\"" << model_colour(m) << "\"/>\n";
        return;
    }
    os << "<path fill=\"none\" stroke=\"" << model_colour(m) << "\" stroke-width=\"1.5\"";
    if (m == Model::qrm) os << " stroke-dasharray=\"6,4\"";
    if (m == Model::multiband) os << " stroke-dasharray=\"2,3\"";
    os << " d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        os << (i ? " L" : "M") << fmt(f.px(pts[i].first), 6) << "," << fmt(f.py(pts[i].second), 6);
    os << "\"/>\n";
}

inline std::string svg_open(int w, int h) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
       << w << " " << h << "\" font-family=\"sans-serif\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    return os.str();
}

inline void legend(std::ostringstream& os, const std::vector<Model>& models, double x, double y) {
    for (std::size_t i = 0; i < models.size(); ++i) {
        const double yy = y + 14.0 * i;
        const Model m = models[i];
        if (m == Model::grid)
            os << "<circle cx=\"" << fmt(x + 10) << "\" cy=\"" << fmt(yy - 4) << "\" r=\"2.5\" fill=\""
               << model_colour(m) << "\"/>\n";
        else
            os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(yy - 4) << "\" x2=\"" << fmt(x + 20) << "\" y2=\""
               << fmt(yy - 4) << "\" stroke=\"" << model_colour(m) << "\" stroke-width=\"1.5\""
               << (m == Model::qrm ? " stroke-dasharray=\"6,4\"" : m == Model::multiband ? " stroke-dasharray=\"2,3\"" : "")
               << "/>\n";
        os << "<text x=\"" << fmt(x + 26) << "\" y=\"" << fmt(yy) << "\" font-size=\"11\">" << to_string(m)
           << "</text>\n";
    }
}

/// Blue-white-red for signed data.
inline std::string diverging(double v, double vmax) {
    const double t = vmax > 0.0 ? std::clamp(v / vmax, -1.0, 1.0) : 0.0;
    int r = 255, g = 255, b = 255;
    if (t > 0) {
        g = b = static_cast<int>(std::lround(255 * (1.0 - t)));
    } else {
        r = g = static_cast<int>(std::lround(255 * (1.0 + t)));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

inline std::string render_panels(const std::vector<CsvRow>& rows, const PlotSpec& spec) {
    const auto splits = distinct_splits(rows);
    const double scale = spec.period ? 1.0 / *spec.period : 1e3;
    const std::string xlabel = spec.period ? "t / (2&#960;/&#969;)" : "t (ms)";
    const double left = 80, right = 110, top = spec.title.empty() ? 20 : 40, gap = 30, bottom = 50;
    const int height = static_cast<int>(top + splits.size() * (spec.panel_height + gap) - gap + bottom);
    std::ostringstream os;
    os << svg_open(spec.width, height);
    if (!spec.title.empty())
        os << "<text x=\"" << spec.width / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
           << xml_escape(spec.title) << "</text>\n";

    double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
    for (const auto& r : rows) {
        tmin = std::min(tmin, r.time * scale);
        tmax = std::max(tmax, r.time * scale);
    }
    for (std::size_t p = 0; p < splits.size(); ++p) {
        std::vector<Model> models;
        std::map<int, std::vector<std::pair<double, double>>> pts;
        double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
        for (const auto& r : rows) {
            if (r.omega_q_hz != splits[p]) continue;
            auto v = pick(r, spec.quantity);
            if (!v) continue;
            if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
            pts[static_cast<int>(r.model)].emplace_back(r.time * scale, *v);
            ymin = std::min(ymin, *v);
            ymax = std::max(ymax, *v);
        }
        if (models.empty()) ymin = 0, ymax = 1;
        pad_range(ymin, ymax);
        double xmin = tmin, xmax = tmax;
        if (!(xmax > xmin)) pad_range(xmin, xmax);
        const Frame f{left, top + p * (spec.panel_height + gap), spec.width - left - right,
                      static_cast<double>(spec.panel_height), xmin, xmax, ymin, ymax};
        draw_axes(os, f, p + 1 == splits.size() ? xlabel : "", quantity_label(spec.quantity));
        for (Model m : models) series_path(os, f, pts[static_cast<int>(m)], m);
        os << "<text x=\"" << fmt(f.x0 + f.w + 8) << "\" y=\"" << fmt(f.y0 + 12)
           << "\" font-size=\"11\">&#969;q/2&#960; = " << fmt(splits[p]) << " Hz</text>\n";
        legend(os, models, f.x0 + f.w + 8, f.y0 + 32);
    }
    os << "</svg>\n";
    return os.str();
}

inline std::string render_phase_space(const std::vector<CsvRow>& rows, const PlotSpec& spec) {
    const auto splits = distinct_splits(rows);
    const double left = 80, right = 110, top = spec.title.empty() ? 20 : 40, gap = 50, bottom = 50;
    const int height = static_cast<int>(top + splits.size() * (spec.panel_height + gap) - gap + bottom);
    std::ostringstream os;
    os << svg_open(spec.width, height);
    if (!spec.title.empty())
        os << "<text x=\"" << spec.width / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
           << xml_escape(spec.title) << "</text>\n";
    for (std::size_t p = 0; p < splits.size(); ++p) {
        std::vector<Model> models;
        std::map<int, std::vector<std::pair<double, double>>> pts;
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
        for (const auto& r : rows) {
            if (r.omega_q_hz != splits[p] || !r.mean_x || !r.mean_q) continue;
            if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
            const double x = *r.mean_x * 1e6, y = *r.mean_q;
            pts[static_cast<int>(r.model)].emplace_back(x, y);
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
        if (models.empty()) xmin = ymin = 0, xmax = ymax = 1;
        pad_range(xmin, xmax);
        pad_range(ymin, ymax);
        const Frame f{left, top + p * (spec.panel_height + gap), spec.width - left - right,
                      static_cast<double>(spec.panel_height), xmin, xmax, ymin, ymax};
        draw_axes(os, f, "&lt;x&gt; (&#956;m)", "&lt;q&gt; (kg m/s)");
        for (Model m : models) series_path(os, f, pts[static_cast<int>(m)], m);
        os << "<text x=\"" << fmt(f.x0 + f.w + 8) << "\" y=\"" << fmt(f.y0 + 12)
           << "\" font-size=\"11\">&#969;q/2&#960; = " << fmt(splits[p]) << " Hz</text>\n";
        legend(os, models, f.x0 + f.w + 8, f.y0 + 32);
    }
    os << "</svg>\n";
    return os.str();
}

inline std::string render_colormap(const std::vector<CsvRow>& rows, const PlotSpec& spec) {
    const double scale = spec.period ? 1.0 / *spec.period : 1e3;
    std::vector<double> times, splits = distinct_splits(rows);
    for (const auto& r : rows)
        if (std::find(times.begin(), times.end(), r.time) == times.end()) times.push_back(r.time);
    std::sort(times.begin(), times.end());
    std::sort(splits.begin(), splits.end());
    double vmax = 0.0;
    for (const auto& r : rows)
        if (auto v = pick(r, spec.quantity)) vmax = std::max(vmax, std::abs(*v));

    auto edges = [](const std::vector<double>& c) {
        std::vector<double> e(c.size() + 1);
        if (c.size() == 1) {
            e[0] = c[0] - 0.5;
            e[1] = c[0] + 0.5;
            return e;
        }
        for (std::size_t i = 1; i < c.size(); ++i) e[i] = 0.5 * (c[i - 1] + c[i]);
        e.front() = c.front() - (e[1] - c.front());
        e.back() = c.back() + (c.back() - e[c.size() - 1]);
        return e;
    };
    std::vector<double> ts(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) ts[i] = times[i] * scale;
    const auto te = edges(ts), we = edges(splits);

    const double left = 80, right = 120, top = spec.title.empty() ? 20 : 40, bottom = 50;
    const double ph = std::max<double>(spec.panel_height, 320);
    std::ostringstream os;
    os << svg_open(spec.width, static_cast<int>(top + ph + bottom));
    if (!spec.title.empty())
        os << "<text x=\"" << spec.width / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
           << xml_escape(spec.title) << "</text>\n";
    const Frame f{left, top, spec.width - left - right, ph, te.front(), te.back(), we.front(), we.back()};
    for (const auto& r : rows) {
        auto v = pick(r, spec.quantity);
        if (!v) continue;
        const auto ti = std::lower_bound(times.begin(), times.end(), r.time) - times.begin();
        const auto wi = std::lower_bound(splits.begin(), splits.end(), r.omega_q_hz) - splits.begin();
        const double x0 = f.px(te[ti]), x1 = f.px(te[ti + 1]);
        const double y0 = f.py(we[wi + 1]), y1 = f.py(we[wi]);
        os << "<rect x=\"" << fmt(x0, 6) << "\" y=\"" << fmt(y0, 6) << "\" width=\"" << fmt(x1 - x0 + 0.3, 6)
           << "\" height=\"" << fmt(y1 - y0 + 0.3, 6) << "\" fill=\"" << diverging(*v, vmax) << "\"/>\n";
    }
    draw_axes(os, f, spec.period ? "t / (2&#960;/&#969;)" : "t (ms)", "&#969;q/2&#960; (Hz)");
    // colour bar
    const double cx = f.x0 + f.w + 30, cw = 16;
    for (int i = 0; i < 64; ++i) {
        const double v = vmax * (1.0 - 2.0 * (i + 0.5) / 64.0);
        os << "<rect x=\"" << fmt(cx) << "\" y=\"" << fmt(f.y0 + f.h * i / 64.0, 6) << "\" width=\"" << cw
           << "\" height=\"" << fmt(f.h / 64.0 + 0.3, 6) << "\" fill=\"" << diverging(v, vmax) << "\"/>\n";
    }
    os << "<rect x=\"" << fmt(cx) << "\" y=\"" << fmt(f.y0) << "\" width=\"" << cw << "\" height=\"" << fmt(f.h)
       << "\" fill=\"none\" stroke=\"#000\"/>\n"
       << "<text x=\"" << fmt(cx + cw + 4) << "\" y=\"" << fmt(f.y0 + 10) << "\" font-size=\"11\">" << fmt(vmax)
       << "</text>\n"
       << "<text x=\"" << fmt(cx + cw + 4) << "\" y=\"" << fmt(f.y0 + f.h / 2 + 4) << "\" font-size=\"11\">0</text>\n"
       << "<text x=\"" << fmt(cx + cw + 4) << "\" y=\"" << fmt(f.y0 + f.h) << "\" font-size=\"11\">" << fmt(-vmax)
       << "</text>\n"
       << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(f.y0 - 6) << "\" font-size=\"11\">&#916;N</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace detail

inline std::string render_svg(const std::vector<CsvRow>& rows, const PlotSpec& spec) {
    if (rows.empty()) throw CsvError("no data rows to plot");
    PlotStyle style = spec.style;
    if (style == PlotStyle::automatic) style = detail::distinct_splits(rows).size() > 6 ? PlotStyle::colormap : PlotStyle::panels;
    switch (style) {
        case PlotStyle::colormap: return detail::render_colormap(rows, spec);
        case PlotStyle::phase_space: return detail::render_phase_space(rows, spec);
        default: return detail::render_panels(rows, spec);
    }
}

/// Renders first, so nothing is written when the CSV is unusable.
inline void plot_csv_file(const std::string& csv_path, const std::string& svg_path, const PlotSpec& spec) {
    const std::string svg = render_svg(read_csv_file(csv_path), spec);
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + svg_path + "'");
    out << svg;
}

}  // namespace pqrm
