#ifndef HODGEQI_SVG_PLOT_HPP
#define HODGEQI_SVG_PLOT_HPP

// Static log-log convergence chart with slope annotations.  Output bytes are
// a pure function of the report.

#include <fstream>
#include <string>

#include "hodgeqi/convergence.hpp"

namespace hodgeqi {

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace detail

inline std::string render_plot_svg(const ConvergenceReport& rep) {
    if (rep.rows.empty()) throw empty_report("render_plot_svg: report has no rows");

    const double W = 760, H = 560;
    const double ml = 80, mr = 30, mt = 40, mb = 60;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& r : rep.rows) {
        double lx = std::log10(r.h);
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        for (double e : {r.error_div, r.error_curl, r.error_full}) {
            double ly = std::log10(std::max(e, 1e-300));
            ymin = std::min(ymin, ly);
            ymax = std::max(ymax, ly);
        }
    }
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double ly) { return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt2(W) +
         "\" height=\"" + detail::fmt2(H) + "\" viewBox=\"0 0 " + detail::fmt2(W) + " " +
         detail::fmt2(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame
    s += "<rect x=\"" + detail::fmt2(ml) + "\" y=\"" + detail::fmt2(mt) + "\" width=\"" +
         detail::fmt2(W - ml - mr) + "\" height=\"" + detail::fmt2(H - mt - mb) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    // decade grid lines and labels
    for (int e = static_cast<int>(std::ceil(xmin)); e <= static_cast<int>(std::floor(xmax)); ++e) {
        double x = px(e);
        s += "<line x1=\"" + detail::fmt2(x) + "\" y1=\"" + detail::fmt2(mt) + "\" x2=\"" +
             detail::fmt2(x) + "\" y2=\"" + detail::fmt2(H - mb) +
             "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
        s += "<text x=\"" + detail::fmt2(x) + "\" y=\"" + detail::fmt2(H - mb + 18) +
             "\" font-size=\"12\" text-anchor=\"middle\">1e" + std::to_string(e) + "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e) {
        double y = py(e);
        s += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(y) + "\" x2=\"" +
             detail::fmt2(W - mr) + "\" y2=\"" + detail::fmt2(y) +
             "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
        s += "<text x=\"" + detail::fmt2(ml - 8) + "\" y=\"" + detail::fmt2(y + 4) +
             "\" font-size=\"12\" text-anchor=\"end\">1e" + std::to_string(e) + "</text>\n";
    }
    s += "<text x=\"" + detail::fmt2((ml + W - mr) / 2) + "\" y=\"" + detail::fmt2(H - 18) +
         "\" font-size=\"14\" text-anchor=\"middle\">h</text>\n";
    s += "<text x=\"20\" y=\"" + detail::fmt2((mt + H - mb) / 2) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         detail::fmt2((mt + H - mb) / 2) + ")\">RMSE</text>\n";

    struct Series {
        const char* name;
        const char* color;
        double slope;
        double (ReportRow::*field);
    };
    const Series series[3] = {{"div", "#1f5fbf", rep.slope_div, &ReportRow::error_div},
                              {"curl", "#bf2f1f", rep.slope_curl, &ReportRow::error_curl},
                              {"full", "#1f8f3f", rep.slope_full, &ReportRow::error_full}};

    for (int si = 0; si < 3; ++si) {
        const auto& ser = series[si];
        std::string pts;
        for (const auto& r : rep.rows) {
            double x = px(std::log10(r.h));
            double y = py(std::log10(std::max(r.*(ser.field), 1e-300)));
            pts += detail::fmt2(x) + "," + detail::fmt2(y) + " ";
        }
        s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + ser.color +
             "\" stroke-width=\"1.5\"/>\n";
        for (const auto& r : rep.rows) {
            double x = px(std::log10(r.h));
            double y = py(std::log10(std::max(r.*(ser.field), 1e-300)));
            s += "<circle cx=\"" + detail::fmt2(x) + "\" cy=\"" + detail::fmt2(y) +
                 "\" r=\"3\" fill=\"" + ser.color + "\"/>\n";
        }
        double ly = mt + 20 + 18 * si;
        s += "<rect x=\"" + detail::fmt2(ml + 12) + "\" y=\"" + detail::fmt2(ly - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + std::string(ser.color) + "\"/>\n";
        s += "<text x=\"" + detail::fmt2(ml + 28) + "\" y=\"" + detail::fmt2(ly) +
             "\" font-size=\"13\">" + ser.name + ", slope " + detail::fmt3(ser.slope) +
             " (window " + std::to_string(rep.slope_window) + ")</text>\n";
    }
    s += "</svg>\n";
    return s;
}

inline void emit_plot(const ConvergenceReport& rep, const std::string& path) {
    std::string svg = render_plot_svg(rep);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("emit_plot: cannot open " + path);
    os << svg;
}

}  // namespace hodgeqi

#endif  // HODGEQI_SVG_PLOT_HPP
