#include "mdpa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mdpa {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};
constexpr int kPaletteSize = 10;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

/// Pads degenerate or empty ranges so the affine data->pixel map is well
/// defined even for constant series.
Range padded(double lo, double hi, bool any) {
    if (!any) return {0.0, 1.0};
    if (lo == hi) {
        double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    double pad = (hi - lo) * 0.04;
    return {lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
    for (const PlotSeries& s : plot.series)
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("PlotSeries: x and y must have equal length");

    const double margin_left = 72.0, margin_right = 16.0, margin_top = 40.0;
    const double margin_bottom = 52.0;
    const double legend_row = 18.0;
    const double plot_w = plot.width - margin_left - margin_right;
    const double plot_h = plot.height - margin_top - margin_bottom;

    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    bool any = false;
    for (const PlotSeries& s : plot.series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                any = true;
            } else {
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, s.y[i]);
                y_hi = std::max(y_hi, s.y[i]);
            }
        }
    Range xr = padded(x_lo, x_hi, any);
    Range yr = padded(y_lo, y_hi, any);

    auto px = [&](double x) { return margin_left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return margin_top + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           num(plot.width) + "\" height=\"" + num(plot.height) + "\" viewBox=\"0 0 " +
           num(plot.width) + " " + num(plot.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(plot.width / 2) + "\" y=\"22\" font-family=\"sans-serif\" "
           "font-size=\"15\" text-anchor=\"middle\">" + escape_xml(plot.title) + "</text>\n";

    // Frame and ticks.
    svg += "<rect x=\"" + num(margin_left) + "\" y=\"" + num(margin_top) + "\" width=\"" +
           num(plot_w) + "\" height=\"" + num(plot_h) +
           "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        double fx = xr.lo + (xr.hi - xr.lo) * i / n_ticks;
        double gx = px(fx);
        svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(margin_top + plot_h) + "\" x2=\"" +
               num(gx) + "\" y2=\"" + num(margin_top + plot_h + 5) +
               "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(gx) + "\" y=\"" + num(margin_top + plot_h + 18) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               num(fx) + "</text>\n";
        double fy = yr.lo + (yr.hi - yr.lo) * i / n_ticks;
        double gy = py(fy);
        svg += "<line x1=\"" + num(margin_left - 5) + "\" y1=\"" + num(gy) + "\" x2=\"" +
               num(margin_left) + "\" y2=\"" + num(gy) +
               "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(margin_left - 8) + "\" y=\"" + num(gy + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + num(fy) +
               "</text>\n";
    }
    svg += "<text x=\"" + num(margin_left + plot_w / 2) + "\" y=\"" +
           num(plot.height - 12) + "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">" + escape_xml(plot.x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + num(margin_top + plot_h / 2) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 16 " + num(margin_top + plot_h / 2) + ")\">" +
           escape_xml(plot.y_label) + "</text>\n";

    // Series: split polylines at non-finite points.
    for (size_t k = 0; k < plot.series.size(); ++k) {
        const PlotSeries& s = plot.series[k];
        const char* color = kPalette[k % kPaletteSize];
        std::string points;
        auto flush = [&]() {
            if (!points.empty()) {
                svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                       "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
                points.clear();
            }
        };
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += num(px(s.x[i])) + "," + num(py(s.y[i]));
        }
        flush();
    }

    // Legend, top-right inside the frame.
    for (size_t k = 0; k < plot.series.size(); ++k) {
        const char* color = kPalette[k % kPaletteSize];
        double ly = margin_top + 14.0 + legend_row * static_cast<double>(k);
        double lx = margin_left + plot_w - 180.0;
        svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 24) +
               "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape_xml(plot.series[k].label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string write_svg(const LinePlot& plot, const std::string& dir, const std::string& stem) {
    std::string doc = render_svg(plot);
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / (stem + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc;
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
    return path.string();
}

}  // namespace mdpa
