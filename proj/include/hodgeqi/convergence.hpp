#ifndef HODGEQI_CONVERGENCE_HPP
#define HODGEQI_CONVERGENCE_HPP

// RMSE / log-log slope utilities and the convergence report artifact.

#include <fstream>
#include <sstream>

#include "hodgeqi/common.hpp"

namespace hodgeqi {

// sqrt of the mean over evaluation points and vector components
inline double rmse(const std::vector<std::vector<double>>& got,
                   const std::vector<std::vector<double>>& want) {
    if (got.size() != want.size() || got.empty())
        throw invalid_argument_error("rmse: size mismatch or empty");
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        for (std::size_t s = 0; s < got[i].size(); ++s) {
            double e = got[i][s] - want[i][s];
            acc += e * e;
            ++n;
        }
    }
    return std::sqrt(acc / static_cast<double>(n));
}

// least squares on (log h, log e) over the trailing `window` entries
inline double fit_loglog_slope(std::span<const double> h, std::span<const double> e,
                               int window) {
    if (h.size() != e.size() || h.size() < 2)
        throw invalid_argument_error("fit_loglog_slope: need >= 2 samples");
    std::size_t n = h.size();
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(window, 2)), n);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = n - w; i < n; ++i) {
        double x = std::log(h[i]);
        double y = std::log(std::max(e[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double dn = static_cast<double>(w);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

struct ReportRow {
    double h = 0.0;
    double error_div = 0.0;
    double error_curl = 0.0;
    double error_full = 0.0;
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;
    int slope_window = 5;
    double slope_div = 0.0, slope_curl = 0.0, slope_full = 0.0;

    void compute_slopes() {
        std::vector<double> h, ed, ec, ef;
        for (const auto& r : rows) {
            h.push_back(r.h);
            ed.push_back(r.error_div);
            ec.push_back(r.error_curl);
            ef.push_back(r.error_full);
        }
        slope_div = fit_loglog_slope(h, ed, slope_window);
        slope_curl = fit_loglog_slope(h, ec, slope_window);
        slope_full = fit_loglog_slope(h, ef, slope_window);
    }
};

namespace detail {

inline std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

}  // namespace detail

inline void save_report_csv(const ConvergenceReport& rep, std::ostream& os) {
    os << "h,error_div,error_curl,error_full\n";
    for (const auto& r : rep.rows)
        os << detail::fmt12(r.h) << "," << detail::fmt12(r.error_div) << ","
           << detail::fmt12(r.error_curl) << "," << detail::fmt12(r.error_full) << "\n";
    os << "# slope_window," << rep.slope_window << "\n";
    os << "# slope_div," << detail::fmt12(rep.slope_div) << "\n";
    os << "# slope_curl," << detail::fmt12(rep.slope_curl) << "\n";
    os << "# slope_full," << detail::fmt12(rep.slope_full) << "\n";
}

inline void save_report_csv(const ConvergenceReport& rep, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("save_report_csv: cannot open " + path);
    save_report_csv(rep, os);
}

inline ConvergenceReport load_report_csv(std::istream& is) {
    ConvergenceReport rep;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream ss(line.substr(1));
            std::string key, value;
            if (std::getline(ss, key, ',') && std::getline(ss, value)) {
                key.erase(0, key.find_first_not_of(' '));
                if (key == "slope_window") rep.slope_window = std::stoi(value);
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        ReportRow r;
        double* cols[4] = {&r.h, &r.error_div, &r.error_curl, &r.error_full};
        int c = 0;
        while (std::getline(ss, cell, ',') && c < 4) *cols[c++] = std::stod(cell);
        if (c != 4) throw io_error("load_report_csv: malformed row");
        rep.rows.push_back(r);
    }
    if (!rep.rows.empty()) rep.compute_slopes();
    return rep;
}

inline ConvergenceReport load_report_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("load_report_csv: cannot open " + path);
    return load_report_csv(is);
}

}  // namespace hodgeqi

#endif  // HODGEQI_CONVERGENCE_HPP
