#pragma once

// Minimal static SVG charts for CLI output: a polyline chart for PD
// curves and a bar chart for category effects. No dependencies beyond
// the standard library; values are formatted with shortest round-trip.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "stratx/catstratpd.hpp"
#include "stratx/format.hpp"
#include "stratx/stratpd.hpp"

namespace stratx {

namespace svg_detail {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 615.0;
constexpr double kTop = 25.0;
constexpr double kBottom = 375.0;

struct Scale {
    double lo, hi, out_lo, out_hi;
    double operator()(double v) const {
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

inline Scale make_scale(double lo, double hi, double out_lo, double out_hi) {
    if (!(hi > lo)) { // degenerate span: pad so the scale stays finite
        lo -= 1.0;
        hi += 1.0;
    }
    return {lo, hi, out_lo, out_hi};
}

inline std::string num(double v) { return format_double(v); }

inline void open_chart(std::ostringstream& out, const std::string& x_label,
                       const std::string& y_label) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(kWidth) << ' '
        << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"" << num(kHeight - 8)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << num((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << num((kTop + kBottom) / 2)
        << ")\">" << y_label << "</text>\n";
}

inline void axes(std::ostringstream& out) {
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\""
        << num(kRight) << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";
}

inline void x_ticks(std::ostringstream& out, const Scale& sx) {
    for (int t = 0; t <= 4; ++t) {
        const double v = sx.lo + (sx.hi - sx.lo) * t / 4.0;
        const double px = sx(v);
        out << "<line x1=\"" << num(px) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(px)
            << "\" y2=\"" << num(kBottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(px) << "\" y=\"" << num(kBottom + 18)
            << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
    }
}

inline void y_ticks(std::ostringstream& out, const Scale& sy) {
    for (int t = 0; t <= 4; ++t) {
        const double v = sy.lo + (sy.hi - sy.lo) * t / 4.0;
        const double py = sy(v);
        out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
}

} // namespace svg_detail

inline std::string svg_line_chart(const PDCurve& curve, const std::string& x_label,
                                  const std::string& y_label) {
    using namespace svg_detail;
    const auto [xmin_it, xmax_it] = std::minmax_element(curve.x.begin(), curve.x.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(curve.pd_y.begin(), curve.pd_y.end());
    const Scale sx = make_scale(*xmin_it, *xmax_it, kLeft, kRight);
    const Scale sy = make_scale(*ymin_it, *ymax_it, kBottom, kTop);

    std::ostringstream out;
    open_chart(out, x_label, y_label);
    axes(out);
    x_ticks(out, sx);
    y_ticks(out, sy);
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (i > 0) out << ' ';
        out << num(sx(curve.x[i])) << ',' << num(sy(curve.pd_y[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << "<circle cx=\"" << num(sx(curve.x[i])) << "\" cy=\"" << num(sy(curve.pd_y[i]))
            << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

inline std::string svg_bar_chart(const CatEffect& effect, const std::vector<std::string>& labels,
                                 const std::string& x_label, const std::string& y_label) {
    using namespace svg_detail;
    std::vector<std::size_t> supported;
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < effect.delta.size(); ++k) {
        if (std::isfinite(effect.delta[k])) {
            supported.push_back(k);
            lo = std::min(lo, effect.delta[k]);
            hi = std::max(hi, effect.delta[k]);
        }
    }
    const Scale sy = make_scale(lo, hi, kBottom, kTop);

    std::ostringstream out;
    open_chart(out, x_label, y_label);
    axes(out);
    y_ticks(out, sy);
    const double zero_y = sy(0.0);
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(zero_y) << "\" x2=\"" << num(kRight)
        << "\" y2=\"" << num(zero_y) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

    const double span = kRight - kLeft;
    const double slot = span / static_cast<double>(supported.size());
    const double bar_w = slot * 0.7;
    for (std::size_t s = 0; s < supported.size(); ++s) {
        const std::size_t k = supported[s];
        const double cx = kLeft + slot * (static_cast<double>(s) + 0.5);
        const double vy = sy(effect.delta[k]);
        const double top = std::min(vy, zero_y);
        const double height = std::abs(vy - zero_y);
        out << "<rect x=\"" << num(cx - bar_w / 2) << "\" y=\"" << num(top) << "\" width=\""
            << num(bar_w) << "\" height=\"" << num(height) << "\" fill=\"#ff7f0e\"/>\n";
        out << "<text x=\"" << num(cx) << "\" y=\"" << num(kBottom + 18)
            << "\" text-anchor=\"middle\">" << labels[k] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace stratx
