#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hodgeqi/boundary_interp.hpp"
#include "hodgeqi/fields.hpp"

using namespace hodgeqi;
using Catch::Approx;

namespace {

std::vector<std::vector<double>> ring_nodes(double h, double lo, double hi, double vlo,
                                            double vhi) {
    // lattice nodes in [lo,hi]^2 outside (vlo,vhi)^2
    std::vector<std::vector<double>> pts;
    int n = static_cast<int>(std::lround((hi - lo) / h));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            double x = lo + i * h, y = lo + j * h;
            bool inside_v = (x > vlo && x < vhi && y > vlo && y < vhi);
            if (!inside_v) pts.push_back({x, y});
        }
    return pts;
}

template <typename F>
double fd4(const F& f, std::vector<double> x, int axis, double step) {
    auto at = [&](double off) {
        x[static_cast<std::size_t>(axis)] += off;
        double v = f(x);
        x[static_cast<std::size_t>(axis)] -= off;
        return v;
    };
    return (-at(2 * step) + 8 * at(step) - 8 * at(-step) + at(-2 * step)) / (12 * step);
}

}  // namespace

TEST_CASE("matern values") {
    REQUIRE(matern_c8(0.0, 3.0) == Approx(1.0));
    // eps r = 1: (105+105+45+10+1)/105 / e
    REQUIRE(matern_c8(1.0, 1.0) == Approx(266.0 / 105.0 / std::exp(1.0)).epsilon(1e-12));
    REQUIRE(matern_c8(1.0, 1.0) == Approx(0.9319612).epsilon(1e-6));
    double prev = 1.0;
    for (double r = 0.1; r < 30.0; r *= 1.5) {
        double v = matern_c8(r, 2.0);
        REQUIRE(v < prev);
        REQUIRE(v > 0.0);
        prev = v;
    }
    REQUIRE(matern_c8(40.0, 2.0) <= 1e-20);
}

TEST_CASE("matern radial derivative polys match finite differences") {
    // D_r^1 phi = phi'(r)/r and D_r^2 phi = (phi'' - phi'/r)/r^2 via FD
    const double eps = 1.7;
    for (double r : {0.3, 1.1, 2.7}) {
        auto f = [&](double rr) { return matern_c8(rr, eps); };
        const double s = 1e-5;
        double d1 = (f(r + s) - f(r - s)) / (2 * s);
        double d2 = (f(r + s) - 2 * f(r) + f(r - s)) / (s * s);
        REQUIRE(matern_dr(1, r, eps) == Approx(d1 / r).epsilon(1e-6));
        REQUIRE(matern_dr(2, r, eps) == Approx((d2 - d1 / r) / (r * r)).epsilon(2e-4));
    }
    // smooth through zero
    REQUIRE(std::isfinite(matern_dr(4, 0.0, 3.0)));
    REQUIRE(matern_dr(1, 0.0, 1.0) == Approx(-1.0 / 7.0));  // -eps^2/7
}

TEST_CASE("interpolant reproduces data at the centers") {
    auto pts = ring_nodes(0.1, 0.0, 1.0, 0.1, 0.9);
    auto f = builtin_field("bd_full");
    std::vector<std::vector<double>> vals;
    for (const auto& p : pts) vals.push_back(f.value(p));
    double eps = default_ring_shape(0.1);
    auto interp = fit_interpolant(pts, vals, eps);

    double fmax = 0.0;
    for (const auto& v : vals) fmax = std::max({fmax, std::abs(v[0]), std::abs(v[1])});
    double emax = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto got = interp.eval(pts[i], InterpPart::full);
        emax = std::max({emax, std::abs(got[0] - vals[i][0]), std::abs(got[1] - vals[i][1])});
    }
    INFO("cond estimate " << interp.condition_estimate());
    REQUIRE(emax <= 1e-8 * std::max(fmax, 1.0));
}

TEST_CASE("single center: kernel column scaled; value reproduced") {
    std::vector<std::vector<double>> pts{{0.3, 0.4}};
    std::vector<std::vector<double>> vals{{1.0, 0.0}};
    auto interp = fit_interpolant(pts, vals, 2.0);
    auto at_center = interp.eval(pts[0], InterpPart::full);
    REQUIRE(at_center[0] == Approx(1.0).margin(1e-12));
    REQUIRE(at_center[1] == Approx(0.0).margin(1e-12));
}

TEST_CASE("div and curl parts: structure and exact splitting") {
    auto pts = ring_nodes(0.2, 0.0, 1.0, 0.2, 0.8);
    auto f = builtin_field("bd_full");
    std::vector<std::vector<double>> vals;
    for (const auto& p : pts) vals.push_back(f.value(p));
    auto interp = fit_interpolant(pts, vals, default_ring_shape(0.2));

    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.15, 0.85);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> x{u(rng), u(rng)};
        auto full = interp.eval(x, InterpPart::full);
        auto dv = interp.eval(x, InterpPart::div);
        auto cl = interp.eval(x, InterpPart::curl);
        REQUIRE(full[0] == dv[0] + cl[0]);  // exact: full is literally div + curl
        REQUIRE(full[1] == dv[1] + cl[1]);

        // FD divergence of the div part
        double div = 0.0, dscale = 0.0;
        for (int i = 0; i < 2; ++i) {
            auto comp = [&](const std::vector<double>& p) {
                return interp.eval(p, InterpPart::div)[static_cast<std::size_t>(i)];
            };
            double di = fd4(comp, x, i, 1e-4);
            div += di;
            dscale += std::abs(di);
        }
        REQUIRE(std::abs(div) <= 1e-6 * std::max(dscale, 1e-6));

        // FD scalar curl of the curl part
        auto c0 = [&](const std::vector<double>& p) {
            return interp.eval(p, InterpPart::curl)[0];
        };
        auto c1 = [&](const std::vector<double>& p) {
            return interp.eval(p, InterpPart::curl)[1];
        };
        double curl = fd4(c1, x, 0, 1e-4) - fd4(c0, x, 1, 1e-4);
        double cscale = std::abs(fd4(c1, x, 0, 1e-4)) + std::abs(fd4(c0, x, 1, 1e-4));
        REQUIRE(std::abs(curl) <= 1e-6 * std::max(cscale, 1e-6));
    }
}

TEST_CASE("closed-form interpolant derivatives match finite differences") {
    auto pts = ring_nodes(0.25, 0.0, 1.0, 0.25, 0.75);
    std::vector<std::vector<double>> vals;
    auto f = builtin_field("bd_full");
    for (const auto& p : pts) vals.push_back(f.value(p));
    auto interp = fit_interpolant(pts, vals, 10.0);

    std::vector<double> x{0.4, 0.55};
    for (int axis = 0; axis < 2; ++axis) {
        auto dv = interp.eval(x, InterpPart::div, mi_unit(2, axis));
        for (int comp = 0; comp < 2; ++comp) {
            auto g = [&](const std::vector<double>& p) {
                return interp.eval(p, InterpPart::div)[static_cast<std::size_t>(comp)];
            };
            REQUIRE(dv[static_cast<std::size_t>(comp)] ==
                    Approx(fd4(g, x, axis, 1e-4)).epsilon(1e-7).margin(1e-9));
        }
    }
}

TEST_CASE("duplicate centers raise singular_system") {
    std::vector<std::vector<double>> pts{{0.1, 0.1}, {0.5, 0.5}, {0.1, 0.1}};
    std::vector<std::vector<double>> vals{{1, 0}, {0, 1}, {1, 0}};
    REQUIRE_THROWS_AS(fit_interpolant(pts, vals, 2.0), singular_system);
}

TEST_CASE("ring interpolation error decreases with fill distance") {
    auto f = builtin_field("bd_full");
    double prev = 1e300;
    for (double h : {1.0 / 10, 1.0 / 20, 1.0 / 40}) {
        auto pts = ring_nodes(h, 0.0, 1.0, 0.1, 0.9);
        std::vector<std::vector<double>> vals;
        for (const auto& p : pts) vals.push_back(f.value(p));
        auto interp = fit_interpolant(pts, vals, default_ring_shape(h));
        // max error at off-center ring probe points
        double emax = 0.0;
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int probes = 0;
        while (probes < 200) {
            std::vector<double> x{u(rng), u(rng)};
            bool in_v = x[0] > 0.1 && x[0] < 0.9 && x[1] > 0.1 && x[1] < 0.9;
            if (in_v) continue;
            ++probes;
            auto got = interp.eval(x, InterpPart::full);
            auto want = f.value(x);
            emax = std::max({emax, std::abs(got[0] - want[0]), std::abs(got[1] - want[1])});
        }
        INFO("h " << h << " ring max err " << emax);
        REQUIRE(emax < prev);
        prev = emax;
    }
}
