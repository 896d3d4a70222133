/* backhaul-sim
 * Copyright (C) 2026 the backhaul-sim developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#include "backhaul/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace backhaul::plot {

namespace {

constexpr double kWidth = 800.0, kHeight = 520.0;
constexpr double kLeft = 70.0, kRight = 780.0, kTop = 50.0, kBottom = 460.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '&') out += "&amp;";
        else if (ch == '<') out += "&lt;";
        else if (ch == '>') out += "&gt;";
        else out += ch;
    }
    return out;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double px_lo, double px_hi) const {
        const double t = (v - lo) / (hi - lo);
        return px_lo + t * (px_hi - px_lo);
    }
};

Range padded(double lo, double hi) {
    if (!(hi > lo)) {  // degenerate span: open a unit window around the value
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

void open_svg(std::ostringstream& svg) {
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
}

void draw_axes(std::ostringstream& svg, const Range& xr, const Range& yr,
               const std::string& title, const std::string& x_label,
               const std::string& y_label) {
    svg << "<text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\"28\" "
        << "font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">"
        << escape(title) << "</text>\n";
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kBottom) << "\" x2=\""
        << fmt(kRight) << "\" y2=\"" << fmt(kBottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
        << fmt(kLeft) << "\" y2=\"" << fmt(kBottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
        const double px = xr.map(fx, kLeft, kRight);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kBottom) << "\" x2=\""
            << fmt(px) << "\" y2=\"" << fmt(kBottom + 5)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kBottom + 20)
            << "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\">"
            << fmt_tick(fx) << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
        const double py = yr.map(fy, kBottom, kTop);
        svg << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(py)
            << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(py)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"end\">"
            << fmt_tick(fy) << "</text>\n";
    }
    svg << "<text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\""
        << fmt(kHeight - 12)
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << fmt((kTop + kBottom) / 2)
        << "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt((kTop + kBottom) / 2) << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series) {
    if (series.empty()) throw std::invalid_argument("line_chart: no series");
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        if (s.points.empty())
            throw std::invalid_argument("line_chart: empty series '" + s.name + "'");
        for (const auto& [x, y] : s.points) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    const Range xr = padded(x_lo, x_hi), yr = padded(y_lo, y_hi);

    std::ostringstream svg;
    open_svg(svg);
    draw_axes(svg, xr, yr, title, x_label, y_label);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[i].points)
            svg << fmt(xr.map(x, kLeft, kRight)) << ","
                << fmt(yr.map(y, kBottom, kTop)) << " ";
        svg << "\"/>\n";
        for (const auto& [x, y] : series[i].points)
            svg << "<circle cx=\"" << fmt(xr.map(x, kLeft, kRight)) << "\" cy=\""
                << fmt(yr.map(y, kBottom, kTop)) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        const double ly = kTop + 16.0 * static_cast<double>(i);
        svg << "<line x1=\"" << fmt(kRight - 150) << "\" y1=\"" << fmt(ly)
            << "\" x2=\"" << fmt(kRight - 120) << "\" y2=\"" << fmt(ly)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(kRight - 114) << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape(series[i].name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string histogram_chart(const std::string& title, const std::string& x_label,
                            const std::vector<HistogramBin>& bins,
                            const std::vector<Overlay>& overlays) {
    if (bins.empty()) throw std::invalid_argument("histogram_chart: no bins");
    double x_lo = bins.front().lo, x_hi = bins.front().hi;
    long c_hi = 0;
    for (const auto& b : bins) {
        x_lo = std::min(x_lo, b.lo);
        x_hi = std::max(x_hi, b.hi);
        c_hi = std::max(c_hi, b.count);
    }
    for (const auto& o : overlays) {
        x_lo = std::min(x_lo, o.x);
        x_hi = std::max(x_hi, o.x);
    }
    const Range xr = padded(x_lo, x_hi);
    const Range yr = padded(0.0, static_cast<double>(std::max<long>(c_hi, 1)));

    std::ostringstream svg;
    open_svg(svg);
    draw_axes(svg, xr, yr, title, x_label, "count");
    for (const auto& b : bins) {
        const double px0 = xr.map(b.lo, kLeft, kRight);
        const double px1 = xr.map(b.hi, kLeft, kRight);
        const double py = yr.map(static_cast<double>(b.count), kBottom, kTop);
        svg << "<rect x=\"" << fmt(px0) << "\" y=\"" << fmt(py) << "\" width=\""
            << fmt(std::max(0.5, px1 - px0)) << "\" height=\""
            << fmt(kBottom - py)
            << "\" fill=\"#1f77b4\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }
    for (std::size_t i = 0; i < overlays.size(); ++i) {
        const double px = xr.map(overlays[i].x, kLeft, kRight);
        const char* color = kPalette[(i + 1) % std::size(kPalette)];
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
            << fmt(px) << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << fmt(px + 4) << "\" y=\""
            << fmt(kTop + 14 + 16.0 * static_cast<double>(i))
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
            << "\">" << escape(overlays[i].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace backhaul::plot
