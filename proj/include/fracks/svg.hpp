#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fracks/io.hpp"
#include "fracks/solver.hpp"

namespace fracks {

namespace svg_detail {

// Minimal static line plot; no timestamps, so output is byte-deterministic.
inline std::string line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                             const std::string& title, const std::string& y_label,
                             bool log_y, const std::string& config_digest) {
    const int width = 640, height = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    std::vector<double> y(ys);
    if (log_y)
        for (double& v : y) v = std::log10(std::max(v, 1e-300));
    double x0 = xs.front(), x1 = xs.back();
    double y0 = y[0], y1 = y[0];
    for (double v : y) {
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); };
    auto py = [&](double v) { return height - mb - (v - y0) / (y1 - y0) * (height - mt - mb); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\">\n";
    s += "<!-- config_digest=" + config_digest + " -->\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(width / 2) + "\" y=\"24\" font-size=\"16\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">" + title + "</text>\n";
    // axes
    s += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(height - mb) +
         "\" x2=\"" + std::to_string(width - mr) + "\" y2=\"" + std::to_string(height - mb) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) + "\" x2=\"" +
         std::to_string(ml) + "\" y2=\"" + std::to_string(height - mb) +
         "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0;
        const double yv = y0 + (y1 - y0) * k / 4.0;
        s += "<text x=\"" + std::to_string(px(xv)) + "\" y=\"" + std::to_string(height - mb + 18) +
             "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
             format_g17(std::round(xv * 1e4) / 1e4).substr(0, 8) + "</text>\n";
        s += "<text x=\"" + std::to_string(ml - 6) + "\" y=\"" + std::to_string(py(yv) + 4) +
             "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" +
             format_g17(std::round(yv * 1e4) / 1e4).substr(0, 8) + "</text>\n";
    }
    s += "<text x=\"14\" y=\"" + std::to_string(height / 2) +
         "\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 14 " +
         std::to_string(height / 2) + ")\" text-anchor=\"middle\">" + y_label +
         (log_y ? " (log10)" : "") + "</text>\n";
    s += "<text x=\"" + std::to_string((ml + width - mr) / 2) + "\" y=\"" +
         std::to_string(height - 12) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">t</text>\n";
    // polyline
    s += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += std::to_string(px(xs[i])) + "," + std::to_string(py(y[i])) + " ";
    s += "\"/>\n</svg>\n";
    return s;
}

}  // namespace svg_detail

// M(t), w_gamma(t), log ||u||_inf (t), dt(t) as standalone SVG files.
inline std::vector<std::string> emit_plots(const MomentSeries& s, const std::string& dir,
                                           const std::string& config_digest = "") {
    require(s.size() >= 2, "emit_plots: series must hold at least two samples");
    struct Spec {
        const std::vector<double>* data;
        const char* file;
        const char* title;
        const char* label;
        bool log_y;
    };
    const Spec specs[] = {
        {&s.mass, "mass.svg", "mass M(t)", "M", false},
        {&s.moment_reg, "moment.svg", "regularized moment w(t)", "w", false},
        {&s.linf, "linf.svg", "sup norm", "||u||_inf", true},
        {&s.dt_used, "dt.svg", "time step", "dt", true},
    };
    std::vector<std::string> written;
    for (const auto& sp : specs) {
        const std::string path = dir + "/" + sp.file;
        io_detail::write_text(
            path, svg_detail::line_plot(s.t, *sp.data, sp.title, sp.label, sp.log_y, config_digest));
        written.push_back(path);
    }
    return written;
}

}  // namespace fracks
