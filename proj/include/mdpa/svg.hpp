#pragma once

#include <string>
#include <vector>

namespace mdpa {

/// One polyline of a plot. Non-finite y values split the line into segments
/// and are excluded from axis scaling, so uncertified (-inf) bounds simply
/// drop out of the picture.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    double width = 760.0;
    double height = 480.0;
};

/// Renders a minimal static SVG 1.1 document: axes with ticks, one polyline
/// per series in a fixed palette, and a legend. Output depends only on the
/// input, byte for byte.
std::string render_svg(const LinePlot& plot);

/// Writes `<dir>/<stem>.svg`, creating `dir` if needed; returns the path.
std::string write_svg(const LinePlot& plot, const std::string& dir, const std::string& stem);

}  // namespace mdpa
