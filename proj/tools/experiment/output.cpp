#include "experiment/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "circqft/version.hpp"

namespace circqft::experiment {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string coord(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                                    "#e377c2", "#17becf"};

}  // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto out = open_for_write(path);
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

void write_svg(const std::filesystem::path& path, std::span<const Panel> panels) {
    constexpr double width = 720.0, panel_height = 300.0;
    constexpr double left = 70.0, right = 160.0, top = 36.0, bottom = 46.0;
    const double height = panel_height * static_cast<double>(panels.size());

    auto out = open_for_write(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const Panel& panel = panels[p];
        const double y0 = panel_height * static_cast<double>(p);
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
        for (const auto& s : panel.series) {
            for (double x : s.x) xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            for (double y : s.y)
                if (std::isfinite(y)) ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
        if (!(xmax > xmin)) xmin -= 0.5, xmax += 0.5;
        if (!(ymax > ymin)) ymin -= 0.5, ymax += 0.5;
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;

        const double pw = width - left - right, ph = panel_height - top - bottom;
        auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
        auto sy = [&](double y) { return y0 + top + (ymax - y) / (ymax - ymin) * ph; };

        out << "<text x=\"" << coord(left) << "\" y=\"" << coord(y0 + 22) << "\" font-size=\"14\">"
            << escape(panel.title) << "</text>\n";
        out << "<rect x=\"" << coord(left) << "\" y=\"" << coord(y0 + top) << "\" width=\"" << coord(pw)
            << "\" height=\"" << coord(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int k = 0; k <= 4; ++k) {
            const double xv = xmin + (xmax - xmin) * k / 4.0, yv = ymin + (ymax - ymin) * k / 4.0;
            out << "<text x=\"" << coord(sx(xv)) << "\" y=\"" << coord(y0 + top + ph + 16)
                << "\" text-anchor=\"middle\">" << short_number(xv) << "</text>\n";
            out << "<text x=\"" << coord(left - 6) << "\" y=\"" << coord(sy(yv) + 4) << "\" text-anchor=\"end\">"
                << short_number(yv) << "</text>\n";
        }
        out << "<text x=\"" << coord(left + pw / 2) << "\" y=\"" << coord(y0 + panel_height - 8)
            << "\" text-anchor=\"middle\">" << escape(panel.x_label) << "</text>\n";
        out << "<text transform=\"translate(16," << coord(y0 + top + ph / 2)
            << ") rotate(-90)\" text-anchor=\"middle\">" << escape(panel.y_label) << "</text>\n";

        for (std::size_t s = 0; s < panel.series.size(); ++s) {
            const Series& series = panel.series[s];
            const char* color = kPalette[s % std::size(kPalette)];
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            const std::size_t n = std::min(series.x.size(), series.y.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(series.y[i])) continue;
                out << coord(sx(series.x[i])) << ',' << coord(sy(series.y[i])) << ' ';
            }
            out << "\"/>\n";
            const double ly = y0 + top + 14.0 + 16.0 * static_cast<double>(s);
            out << "<line x1=\"" << coord(width - right + 12) << "\" y1=\"" << coord(ly - 4) << "\" x2=\""
                << coord(width - right + 32) << "\" y2=\"" << coord(ly - 4) << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << coord(width - right + 38) << "\" y=\"" << coord(ly) << "\">"
                << escape(series.label) << "</text>\n";
        }
    }
    out << "</svg>\n";
}

void write_metadata(const std::filesystem::path& path, const std::string& command, const nlohmann::json& config,
                    const nlohmann::json& summary, const std::vector<std::string>& outputs) {
    nlohmann::json meta;
    meta["tool"] = "circqft";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["config"] = config;
    meta["summary"] = summary;
    meta["outputs"] = outputs;
    auto out = open_for_write(path);
    out << meta.dump(2) << '\n';
}

}  // namespace circqft::experiment
