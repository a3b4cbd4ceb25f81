#ifndef HODGEQI_GRID_FIELD_HPP
#define HODGEQI_GRID_FIELD_HPP

// Vector-field samples on a regular lattice, plus the shared CSV format
// (rows x_1,...,x_d,f_1,...,f_d).

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hodgeqi/common.hpp"

namespace hodgeqi {

struct GridField {
    int dim = 0;
    std::vector<double> origin;
    double h = 1.0;
    std::vector<int> extents;     // nodes per axis
    std::vector<double> values;   // num_nodes * dim, node-major (axis 0 slowest)

    std::size_t num_nodes() const {
        std::size_t n = 1;
        for (int e : extents) n *= static_cast<std::size_t>(e);
        return n;
    }

    std::size_t node_flat(std::span<const int> iv) const {
        std::size_t f = 0;
        for (int s = 0; s < dim; ++s)
            f = f * static_cast<std::size_t>(extents[static_cast<std::size_t>(s)]) +
                static_cast<std::size_t>(iv[static_cast<std::size_t>(s)]);
        return f;
    }

    std::vector<double> node_point(std::span<const int> iv) const {
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (int s = 0; s < dim; ++s)
            x[static_cast<std::size_t>(s)] =
                origin[static_cast<std::size_t>(s)] + h * iv[static_cast<std::size_t>(s)];
        return x;
    }

    double* value_at(std::size_t flat) { return values.data() + flat * static_cast<std::size_t>(dim); }
    const double* value_at(std::size_t flat) const {
        return values.data() + flat * static_cast<std::size_t>(dim);
    }

    void validate() const {
        if (dim < 1) throw invalid_argument_error("GridField: dim must be >= 1");
        if (h <= 0.0) throw invalid_argument_error("GridField: h must be > 0");
        if (static_cast<int>(origin.size()) != dim || static_cast<int>(extents.size()) != dim)
            throw invalid_argument_error("GridField: origin/extents dim mismatch");
        for (int e : extents)
            if (e < 1) throw invalid_argument_error("GridField: empty extent");
        if (values.size() != num_nodes() * static_cast<std::size_t>(dim))
            throw invalid_argument_error("GridField: values size mismatch");
    }

    // Sample a callable field f(x) -> d-vector on the lattice.
    static GridField sample(std::vector<double> origin, double h, std::vector<int> extents,
                            const std::function<std::vector<double>(const std::vector<double>&)>& f) {
        GridField g;
        g.dim = static_cast<int>(origin.size());
        g.origin = std::move(origin);
        g.h = h;
        g.extents = std::move(extents);
        g.values.resize(g.num_nodes() * static_cast<std::size_t>(g.dim));
        g.validate_shape_only();
        std::vector<int> iv(static_cast<std::size_t>(g.dim), 0);
        for (std::size_t flat = 0; flat < g.num_nodes(); ++flat) {
            auto v = f(g.node_point(iv));
            std::copy(v.begin(), v.end(), g.value_at(flat));
            g.advance(iv);
        }
        return g;
    }

    void advance(std::vector<int>& iv) const {
        for (int s = dim - 1; s >= 0; --s) {
            if (++iv[static_cast<std::size_t>(s)] < extents[static_cast<std::size_t>(s)]) return;
            iv[static_cast<std::size_t>(s)] = 0;
        }
    }

  private:
    void validate_shape_only() const {
        if (dim < 1 || h <= 0.0) throw invalid_argument_error("GridField: bad shape");
        for (int e : extents)
            if (e < 1) throw invalid_argument_error("GridField: empty extent");
    }
};

namespace detail {

inline std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace detail

inline void save_field_csv(const GridField& g, std::ostream& os) {
    for (int s = 0; s < g.dim; ++s) os << "x" << (s + 1) << ",";
    for (int s = 0; s < g.dim; ++s) os << "f" << (s + 1) << (s + 1 == g.dim ? "\n" : ",");
    std::vector<int> iv(static_cast<std::size_t>(g.dim), 0);
    for (std::size_t flat = 0; flat < g.num_nodes(); ++flat) {
        auto x = g.node_point(iv);
        for (double v : x) os << detail::fmt_sci(v) << ",";
        const double* f = g.value_at(flat);
        for (int s = 0; s < g.dim; ++s)
            os << detail::fmt_sci(f[s]) << (s + 1 == g.dim ? "\n" : ",");
        g.advance(iv);
    }
}

inline void save_field_csv(const GridField& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("save_field_csv: cannot open " + path);
    save_field_csv(g, os);
}

// Parses rows x_1..x_d,f_1..f_d and reconstructs the lattice.  Errors unless
// the points form a complete regular grid with uniform spacing (1e-9 relative)
// shared by all axes.
inline GridField load_field_csv(std::istream& is, int dim) {
    if (dim < 1) throw invalid_argument_error("load_field_csv: dim must be >= 1");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                row.push_back(v);
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (rows.empty()) continue;  // header
            throw io_error("load_field_csv: non-numeric row");
        }
        if (static_cast<int>(row.size()) != 2 * dim)
            throw io_error("load_field_csv: expected " + std::to_string(2 * dim) +
                           " columns");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw io_error("load_field_csv: no data rows");

    // per-axis sorted unique coordinates
    std::vector<std::vector<double>> coords(static_cast<std::size_t>(dim));
    for (int s = 0; s < dim; ++s) {
        std::vector<double> c;
        c.reserve(rows.size());
        for (const auto& r : rows) c.push_back(r[static_cast<std::size_t>(s)]);
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        // collapse numerically equal coordinates
        std::vector<double> u;
        for (double v : c)
            if (u.empty() || std::abs(v - u.back()) > 1e-12 * (1.0 + std::abs(v)))
                u.push_back(v);
        coords[static_cast<std::size_t>(s)] = std::move(u);
    }

    double h = 0.0;
    for (int s = 0; s < dim; ++s) {
        const auto& u = coords[static_cast<std::size_t>(s)];
        if (u.size() < 2) continue;
        double d0 = u[1] - u[0];
        for (std::size_t i = 1; i + 1 < u.size(); ++i) {
            double d = u[i + 1] - u[i];
            if (std::abs(d - d0) > 1e-9 * std::abs(d0))
                throw io_error("load_field_csv: non-uniform spacing on axis " +
                               std::to_string(s + 1));
        }
        if (h == 0.0)
            h = d0;
        else if (std::abs(d0 - h) > 1e-9 * std::abs(h))
            throw io_error("load_field_csv: spacing differs between axes");
    }
    if (h == 0.0) throw io_error("load_field_csv: degenerate lattice");

    GridField g;
    g.dim = dim;
    g.h = h;
    g.origin.resize(static_cast<std::size_t>(dim));
    g.extents.resize(static_cast<std::size_t>(dim));
    std::size_t n = 1;
    for (int s = 0; s < dim; ++s) {
        g.origin[static_cast<std::size_t>(s)] = coords[static_cast<std::size_t>(s)].front();
        g.extents[static_cast<std::size_t>(s)] =
            static_cast<int>(coords[static_cast<std::size_t>(s)].size());
        n *= coords[static_cast<std::size_t>(s)].size();
    }
    if (n != rows.size()) throw io_error("load_field_csv: incomplete lattice");

    g.values.assign(n * static_cast<std::size_t>(dim), 0.0);
    std::vector<char> seen(n, 0);
    std::vector<int> iv(static_cast<std::size_t>(dim));
    for (const auto& r : rows) {
        for (int s = 0; s < dim; ++s) {
            double t = (r[static_cast<std::size_t>(s)] - g.origin[static_cast<std::size_t>(s)]) / h;
            int i = static_cast<int>(std::lround(t));
            if (std::abs(t - i) > 1e-6 ||
                i < 0 || i >= g.extents[static_cast<std::size_t>(s)])
                throw io_error("load_field_csv: point off the lattice");
            iv[static_cast<std::size_t>(s)] = i;
        }
        std::size_t flat = g.node_flat(iv);
        if (seen[flat]) throw io_error("load_field_csv: duplicate lattice node");
        seen[flat] = 1;
        for (int s = 0; s < dim; ++s)
            g.value_at(flat)[s] = r[static_cast<std::size_t>(dim + s)];
    }
    g.validate();
    return g;
}

inline GridField load_field_csv(const std::string& path, int dim) {
    std::ifstream is(path);
    if (!is) throw io_error("load_field_csv: cannot open " + path);
    return load_field_csv(is, dim);
}

}  // namespace hodgeqi

#endif  // HODGEQI_GRID_FIELD_HPP
