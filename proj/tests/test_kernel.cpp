#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hodgeqi/matrix_kernel.hpp"

using namespace hodgeqi;
using Catch::Approx;

namespace {

bool expr_equal(const RadialExpr& a, const RadialExpr& b) { return (a - b).is_zero(); }

std::vector<double> random_point(std::mt19937& rng, int dim, double rmin, double rmax) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> radius(rmin, rmax);
    std::vector<double> x(static_cast<std::size_t>(dim));
    double nrm = 0.0;
    for (auto& v : x) {
        v = gauss(rng);
        nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    double r = radius(rng);
    for (auto& v : x) v *= r / nrm;
    return x;
}

// keep FD sample points away from the stencil's singular offsets
bool clear_of_offsets(const std::vector<double>& x, const Stencil& st, double margin) {
    for (const auto& [nu, w] : st.weights) {
        double d2 = 0.0;
        for (std::size_t s = 0; s < x.size(); ++s) {
            double dd = x[s] - nu[s];
            d2 += dd * dd;
        }
        if (d2 < margin * margin) return false;
    }
    return true;
}

// 4th-order central difference along one axis
template <typename F>
double fd4(const F& f, std::vector<double> x, int axis, double h) {
    auto at = [&](double off) {
        x[static_cast<std::size_t>(axis)] += off;
        double v = f(x);
        x[static_cast<std::size_t>(axis)] -= off;
        return v;
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("kernel spec validation") {
    REQUIRE_THROWS_AS(KernelSpec::general(0, 0, 0, 2, 2, 2), invalid_argument_error);
    REQUIRE_THROWS_AS(KernelSpec::divergence_free(2, 3, 2), invalid_argument_error);  // k > l
    REQUIRE_THROWS_AS(KernelSpec::divergence_free(2, 2, 1), invalid_argument_error);  // dim < 2
    REQUIRE_THROWS_AS(KernelSpec::curl_free(2, 2, 2, 1, 1, 0), invalid_argument_error);
    REQUIRE(KernelSpec::curl_free(2, 2, 2).fold_sign() == 1);
    REQUIRE(KernelSpec::curl_free(2, 2, 2, 0, 1, 1).fold_sign() == -1);
    REQUIRE(KernelSpec::curl_free(2, 2, 2, 0, 1, 0).fold_sign() == -1);
    REQUIRE(KernelSpec::curl_free(2, 2, 2, 1, 0, 1).fold_sign() == 1);
}

TEST_CASE("div kernel entries: trace identity") {
    auto ev = build_kernel(KernelSpec::divergence_free(2, 2, 2));
    // trace(Lap I - grad grad^T) phi = (d-1) Lap phi
    RadialExpr phi3 = phi_expr(3, 2);
    RadialExpr trace = ev.entry(0, 0) + ev.entry(1, 1);
    REQUIRE(expr_equal(trace, laplacian(phi3)));  // d - 1 = 1
}

TEST_CASE("default curl kernel entries are second derivatives of phi_{l+1}") {
    auto ev = build_kernel(KernelSpec::curl_free(2, 2, 2));
    RadialExpr phi3 = phi_expr(3, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            REQUIRE(expr_equal(ev.entry(i, j), differentiate(differentiate(phi3, i), j)));
}

TEST_CASE("harmonic kernel vanishes pointwise") {
    auto ev = build_kernel(KernelSpec::harmonic(2, 2, 2));
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) REQUIRE(ev.entry(i, j).is_zero());
    std::mt19937 rng(3);
    for (int t = 0; t < 100; ++t) {
        auto x = random_point(rng, 2, 0.2, 4.0);
        auto m = ev.eval(x);
        for (double v : m.a) REQUIRE(std::abs(v) <= 1e-12);
    }
}

TEST_CASE("matrix symmetry and evenness") {
    std::mt19937 rng(11);
    for (auto spec : {KernelSpec::divergence_free(2, 2, 2), KernelSpec::curl_free(2, 2, 2),
                      KernelSpec::divergence_free(2, 2, 3)}) {
        auto ev = build_kernel(spec);
        for (int t = 0; t < 100; ++t) {
            auto x = random_point(rng, spec.dim, 0.3, 5.0);
            auto m = ev.eval(x);
            std::vector<double> neg(x.size());
            for (std::size_t s = 0; s < x.size(); ++s) neg[s] = -x[s];
            auto mn = ev.eval(neg);
            for (int i = 0; i < spec.dim; ++i)
                for (int j = 0; j < spec.dim; ++j) {
                    REQUIRE(m.at(i, j) == m.at(j, i));
                    REQUIRE(m.at(i, j) == Approx(mn.at(i, j)).margin(1e-12));
                }
        }
    }
}

TEST_CASE("divergence-free and curl-free column structure") {
    std::mt19937 rng(17);
    const double h = 1e-4;
    for (int dim : {2, 3}) {
        auto dv = build_kernel(KernelSpec::divergence_free(2, 2, dim));
        auto cl = build_kernel(KernelSpec::curl_free(2, 2, dim));
        int checked = 0;
        while (checked < 25) {
            auto x = random_point(rng, dim, 0.5, 3.0);
            if (!clear_of_offsets(x, dv.stencil(), 0.1)) continue;
            ++checked;
            for (int j = 0; j < dim; ++j) {
                double div = 0.0, scale = 0.0;
                for (int i = 0; i < dim; ++i) {
                    auto entry = [&](const std::vector<double>& p) {
                        return dv.eval(p).at(i, j);
                    };
                    double di = fd4(entry, x, i, h);
                    div += di;
                    scale += std::abs(di);
                }
                REQUIRE(std::abs(div) <= 1e-6 * std::max(scale, 1e-8));

                for (int a = 0; a < dim; ++a)
                    for (int b = a + 1; b < dim; ++b) {
                        auto ea = [&](const std::vector<double>& p) {
                            return cl.eval(p).at(b, j);
                        };
                        auto eb = [&](const std::vector<double>& p) {
                            return cl.eval(p).at(a, j);
                        };
                        double da = fd4(ea, x, a, h);
                        double db = fd4(eb, x, b, h);
                        double res = da - db;
                        double sc = std::abs(da) + std::abs(db);
                        REQUIRE(std::abs(res) <= 1e-6 * std::max(sc, 1e-8));
                    }
            }
        }
    }
}

TEST_CASE("scalar psi: k = 1 equals the iterated central difference of phi") {
    // independent route: recursive application of the operator definition
    for (int ell : {1, 2}) {
        RadialExpr phi = phi_expr(ell, 2);
        std::function<double(std::vector<double>, int)> dtilde =
            [&](std::vector<double> x, int depth) -> double {
            if (depth == 0) return evaluate(phi, x);
            double acc = 0.0;
            for (int s = 0; s < 2; ++s) {
                auto xp = x, xm = x;
                xp[static_cast<std::size_t>(s)] += 1.0;
                xm[static_cast<std::size_t>(s)] -= 1.0;
                acc += dtilde(xp, depth - 1) - 2.0 * dtilde(x, depth - 1) +
                       dtilde(xm, depth - 1);
            }
            return acc;
        };
        std::mt19937 rng(23);
        for (int t = 0; t < 10; ++t) {
            auto x = random_point(rng, 2, 0.2, 2.5);
            double via_stencil = eval_scalar_psi(ell, 1, x);
            double via_recursion = dtilde(x, ell);
            REQUIRE(via_stencil == Approx(via_recursion).margin(1e-10));
        }
    }
}

TEST_CASE("scalar psi: evenness and far-field decay spot check") {
    std::mt19937 rng(31);
    for (int t = 0; t < 20; ++t) {
        auto x = random_point(rng, 2, 0.3, 4.0);
        std::vector<double> nx{-x[0], -x[1]};
        REQUIRE(eval_scalar_psi(2, 2, x) == Approx(eval_scalar_psi(2, 2, nx)).margin(1e-12));
    }
    // |psi_{2,2}(x)| * ||x||^(d+2k) stays bounded along rays out to r = 100
    std::normal_distribution<double> gauss;
    for (int ray = 0; ray < 4; ++ray) {
        double ux = gauss(rng), uy = gauss(rng);
        double nrm = std::hypot(ux, uy);
        ux /= nrm;
        uy /= nrm;
        for (double r = 10.0; r <= 100.0; r *= 2.0) {
            std::vector<double> x{r * ux, r * uy};
            double v = std::abs(eval_scalar_psi(2, 2, x)) * ipow(r, 6);
            REQUIRE(v <= 50.0);
        }
    }
}

TEST_CASE("partition of unity pins the sign and normalization") {
    // Strang-Fix value conditions via Poisson summation: sum_j psi(x - j) = 1.
    std::vector<double> x{0.3, 0.7};
    double acc = 0.0;
    for (int j1 = -40; j1 <= 40; ++j1)
        for (int j2 = -40; j2 <= 40; ++j2) {
            std::vector<double> p{x[0] - j1, x[1] - j2};
            acc += eval_scalar_psi(2, 2, p);
        }
    REQUIRE(acc == Approx(1.0).margin(1e-3));
}

TEST_CASE("kernel_hat: projector structure") {
    auto dspec = KernelSpec::divergence_free(2, 2, 2);
    auto cspec = KernelSpec::curl_free(2, 2, 2);

    // psi_hat vanishes at nonzero lattice frequencies -> zero matrix
    std::vector<double> w2pi{2.0 * pi, 0.0};
    auto md = kernel_hat(dspec, w2pi);
    for (double v : md.a) REQUIRE(std::abs(v) <= 1e-14);

    // axis-aligned omega: curl projector is diag(1, 0)
    std::vector<double> wa{1.3, 0.0};
    auto q = build_q(2, 2, 2);
    double psi = symbol(q, 2, wa);
    auto mc = kernel_hat(cspec, wa);
    REQUIRE(mc.at(0, 0) == Approx(psi));
    REQUIRE(std::abs(mc.at(0, 1)) <= 1e-15);
    REQUIRE(std::abs(mc.at(1, 1)) <= 1e-15);

    // complementarity: div + curl = psi_hat I
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> w{u(rng), u(rng)};
        if (w[0] * w[0] + w[1] * w[1] < 1e-3) continue;
        auto a = kernel_hat(dspec, w);
        auto b = kernel_hat(cspec, w);
        double ps = symbol(q, 2, w);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double sum = a.at(i, j) + b.at(i, j);
                double expect = (i == j) ? ps : 0.0;
                REQUIRE(sum == Approx(expect).margin(1e-12));
            }
    }

    REQUIRE_THROWS_AS(kernel_hat(dspec, std::vector<double>{0.0, 0.0}), direction_undefined);
}

TEST_CASE("all four curl variants agree as projectors in Fourier") {
    std::vector<KernelSpec> variants{
        KernelSpec::curl_free(2, 2, 2, 0, 1, 1), KernelSpec::curl_free(2, 2, 2, 1, 0, 1),
        KernelSpec::curl_free(2, 2, 2, 0, 1, 0), KernelSpec::curl_free(2, 2, 2, 0, 0, 1)};
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> w{u(rng), u(rng)};
        if (w[0] * w[0] + w[1] * w[1] < 1e-3) continue;
        auto ref = kernel_hat(variants[0], w);
        for (std::size_t v = 1; v < variants.size(); ++v) {
            auto m = kernel_hat(variants[v], w);
            for (std::size_t i = 0; i < m.a.size(); ++i)
                REQUIRE(m.a[i] == Approx(ref.a[i]).margin(1e-10));
        }
    }
}

TEST_CASE("strang-fix report for (2,2) in d = 2") {
    auto rep = check_strang_fix(2, 2, 2, 3, 3);
    INFO("origin value dev " << rep.origin_value_dev);
    INFO("origin deriv dev " << rep.origin_deriv_dev);
    INFO("lattice value dev " << rep.lattice_value_dev);
    INFO("lattice deriv dev " << rep.lattice_deriv_dev);
    INFO("decay exponent " << rep.decay_exponent << " expected " << rep.decay_expected);
    REQUIRE(rep.decay_exponent <= rep.decay_expected + 0.3);  // at least the decay law
    REQUIRE(rep.pass);
    REQUIRE_THROWS_AS(check_strang_fix(2, 2, 2, 4, 3), invalid_argument_error);
}

TEST_CASE("singular entries at lattice coincidences raise; off-lattice is finite") {
    // (l,k) = (1,1): div entries carry ln r, no limit at stencil offsets
    auto ev = build_kernel(KernelSpec::divergence_free(1, 1, 2));
    REQUIRE_THROWS_AS(ev.eval(std::vector<double>{0.0, 0.0}), nonremovable_singularity);
    REQUIRE_THROWS_AS(ev.eval(std::vector<double>{1.0, 0.0}), nonremovable_singularity);
    auto m = ev.eval(std::vector<double>{0.4, 0.3});
    for (double v : m.a) REQUIRE(std::isfinite(v));
}
