#pragma once

// Tiny static SVG emitter for the report bundle: a line plot (optionally
// log-log) and a histogram. Deterministic text output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace confcurve_cli {

namespace svg_detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Canvas {
    std::string body;
    int width = 640, height = 420;
    int left = 70, right = 20, top = 36, bottom = 46;

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

    double px(double x) const {
        return left + (x - x0) / (x1 - x0) * (width - left - right);
    }
    double py(double y) const {
        return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom);
    }

    void line(double xa, double ya, double xb, double yb, const char* color, double w = 1.0) {
        body += "<line x1='" + fmt(xa) + "' y1='" + fmt(ya) + "' x2='" + fmt(xb) + "' y2='" +
                fmt(yb) + "' stroke='" + color + "' stroke-width='" + fmt(w) + "'/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 12,
              const char* anchor = "middle") {
        body += "<text x='" + fmt(x) + "' y='" + fmt(y) + "' font-size='" +
                std::to_string(size) + "' font-family='sans-serif' text-anchor='" + anchor +
                "'>" + s + "</text>\n";
    }

    std::string finish() const {
        return "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(width) +
               "' height='" + std::to_string(height) + "'>\n<rect width='100%' height='100%' fill='white'/>\n" +
               body + "</svg>\n";
    }
};

}  // namespace svg_detail

/// Polyline plot of (x, y) pairs; log-log axes when requested (all data
/// must then be positive).
inline std::string line_plot_svg(const std::string& title, const std::string& xlabel,
                                 const std::string& ylabel,
                                 const std::vector<std::pair<double, double>>& points,
                                 bool loglog) {
    using svg_detail::fmt;
    svg_detail::Canvas c;
    auto tx = [&](double v) { return loglog ? std::log10(v) : v; };
    c.x0 = c.x1 = tx(points.front().first);
    c.y0 = c.y1 = tx(points.front().second);
    for (const auto& [x, y] : points) {
        c.x0 = std::min(c.x0, tx(x));
        c.x1 = std::max(c.x1, tx(x));
        c.y0 = std::min(c.y0, tx(y));
        c.y1 = std::max(c.y1, tx(y));
    }
    const double padx = 0.05 * (c.x1 - c.x0 + 1e-12), pady = 0.05 * (c.y1 - c.y0 + 1e-12);
    c.x0 -= padx; c.x1 += padx; c.y0 -= pady; c.y1 += pady;

    c.line(c.left, c.height - c.bottom, c.width - c.right, c.height - c.bottom, "black");
    c.line(c.left, c.top, c.left, c.height - c.bottom, "black");
    for (int k = 0; k <= 4; ++k) {
        const double fx = c.x0 + (c.x1 - c.x0) * k / 4.0;
        const double fy = c.y0 + (c.y1 - c.y0) * k / 4.0;
        c.line(c.px(fx), c.height - c.bottom, c.px(fx), c.height - c.bottom + 4, "black");
        c.line(c.left - 4, c.py(fy), c.left, c.py(fy), "black");
        c.text(c.px(fx), c.height - c.bottom + 16, fmt(loglog ? std::pow(10.0, fx) : fx), 10);
        c.text(c.left - 8, c.py(fy) + 4, fmt(loglog ? std::pow(10.0, fy) : fy), 10, "end");
    }
    std::string poly = "<polyline fill='none' stroke='#1f6fb2' stroke-width='1.5' points='";
    for (const auto& [x, y] : points)
        poly += fmt(c.px(tx(x))) + "," + fmt(c.py(tx(y))) + " ";
    poly += "'/>\n";
    c.body += poly;
    for (const auto& [x, y] : points) {
        c.body += "<circle cx='" + fmt(c.px(tx(x))) + "' cy='" + fmt(c.py(tx(y))) +
                  "' r='2.5' fill='#1f6fb2'/>\n";
    }
    c.text(c.width / 2.0, 20, title, 14);
    c.text(c.width / 2.0, c.height - 8, xlabel, 11);
    c.text(16, c.top - 10, ylabel, 11, "start");
    return c.finish();
}

inline std::string histogram_svg(const std::string& title, const std::string& xlabel,
                                 const std::vector<double>& values, int bins) {
    using svg_detail::fmt;
    svg_detail::Canvas c;
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi - lo < 1e-300) {
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<int> count(bins, 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        count[std::clamp(b, 0, bins - 1)]++;
    }
    const int peak = *std::max_element(count.begin(), count.end());
    c.x0 = lo;
    c.x1 = hi;
    c.y0 = 0;
    c.y1 = peak * 1.05 + 1e-12;
    c.line(c.left, c.height - c.bottom, c.width - c.right, c.height - c.bottom, "black");
    c.line(c.left, c.top, c.left, c.height - c.bottom, "black");
    for (int b = 0; b < bins; ++b) {
        const double xa = lo + (hi - lo) * b / bins;
        const double xb = lo + (hi - lo) * (b + 1) / bins;
        const double y = c.py(count[b]);
        c.body += "<rect x='" + fmt(c.px(xa)) + "' y='" + fmt(y) + "' width='" +
                  fmt(c.px(xb) - c.px(xa)) + "' height='" + fmt(c.py(0) - y) +
                  "' fill='#76a94d' stroke='white' stroke-width='0.5'/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double fx = lo + (hi - lo) * k / 4.0;
        c.text(c.px(fx), c.height - c.bottom + 16, fmt(fx), 10);
    }
    c.text(c.width / 2.0, 20, title, 14);
    c.text(c.width / 2.0, c.height - 8, xlabel, 11);
    return c.finish();
}

}  // namespace confcurve_cli
