// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion.  Exit code 0 iff all pass.

#include <cstdarg>
#include <cstdio>
#include <random>

#include "hodgeqi/experiment.hpp"

using namespace hodgeqi;

namespace {

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%d] %-28s %s  (%s)\n", idx, name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::vector<double> desk_h_list() {
    std::vector<double> h;
    for (int i = 0; i <= 8; ++i) h.push_back(12.0 / (18 + 6 * i));
    return h;
}

// Criterion 1: whole-space rates, desk scale, trailing-5 slopes.
void criterion1() {
    ExperimentConfig cfg;
    cfg.experiment = "wholespace";
    cfg.builtin = "ws_full";
    cfg.ell = 2;
    cfg.k = 2;
    cfg.h_list = desk_h_list();
    cfg.sample_box = Box{{0.0, 0.0}, {12.0, 12.0}};
    cfg.eval_box = Box{{5.5, 5.5}, {6.5, 6.5}};
    cfg.eval_mesh = 20;
    cfg.slope_window = 5;

    cfg.alpha = 0;
    auto r0 = run_wholespace(cfg);
    cfg.alpha = 1;
    auto r1 = run_wholespace(cfg);

    bool pass = r0.slope_div >= 3.5 && r0.slope_curl >= 3.5 && r0.slope_full >= 3.5 &&
                r1.slope_div >= 2.5 && r1.slope_curl >= 2.5 && r1.slope_full >= 2.5;
    report(1, "whole-space rates", pass,
           fmt("a0 slopes div %.3f curl %.3f full %.3f >= 3.5; "
               "a1 slopes div %.3f curl %.3f full %.3f >= 2.5",
               r0.slope_div, r0.slope_curl, r0.slope_full, r1.slope_div, r1.slope_curl,
               r1.slope_full));
}

// Criterion 2: bounded-domain rates for (2,2) and (3,3).
void criterion2() {
    auto run = [](int lk, double C, double shape) {
        ExperimentConfig cfg;
        cfg.experiment = "bounded";
        cfg.builtin = "bd_full";
        cfg.ell = lk;
        cfg.k = lk;
        cfg.sample_box = Box{{0.0, 0.0}, {1.0, 1.0}};
        cfg.V = Box{{0.1, 0.1}, {0.9, 0.9}};
        cfg.C = C;
        cfg.eps_rule = 1e-3;
        cfg.matern_shape = shape;
        cfg.eval_mesh = 30;
        cfg.slope_window = 5;
        for (int i = 1; i <= 5; ++i) cfg.h_list.push_back(1.0 / (5 + 10 * i));
        return run_bounded(cfg);
    };
    auto r22 = run(2, 0.08, 5.0);
    auto r33 = run(3, 0.05, 6.0);
    bool w22 = r22.slope_div >= 0.42 && r22.slope_div <= 1.0;
    bool w33 = r33.slope_div >= 0.50 && r33.slope_div <= 1.1;
    bool order = r33.slope_div > r22.slope_div;
    report(2, "bounded-domain rates", w22 && w33 && order,
           fmt("(2,2) slope %.3f in [0.42,1.0]; (3,3) slope %.3f in [0.50,1.1]; "
               "(3,3) > (2,2): %s",
               r22.slope_div, r33.slope_div, order ? "yes" : "no"));
}

// Criterion 3: Strang-Fix values and FD derivatives through order 3.
void criterion3() {
    bool pass = true;
    std::string detail;
    for (auto [ell, k] : {std::pair{2, 2}, {3, 3}}) {
        auto r = check_strang_fix(ell, k, 2, 3, 3);
        bool ok = r.origin_value_dev <= 1e-6 && r.lattice_value_dev <= 1e-14 &&
                  r.origin_deriv_dev <= 1e-5 && r.lattice_deriv_dev <= 1e-5;
        pass = pass && ok;
        detail += fmt("(%d,%d): |psih(0)-1| %.1e, |psih(2pij)| %.1e, derivs %.1e/%.1e; ",
                      ell, k, r.origin_value_dev, r.lattice_value_dev, r.origin_deriv_dev,
                      r.lattice_deriv_dev);
    }
    report(3, "strang-fix suite", pass, detail);
}

// Criterion 4: kernel structure identities.
void criterion4() {
    std::mt19937 rng(1234);
    std::normal_distribution<double> gauss;
    auto dv = build_kernel(KernelSpec::divergence_free(2, 2, 2));
    auto cl = build_kernel(KernelSpec::curl_free(2, 2, 2));
    const double step = 1e-4;
    double max_div = 0.0, max_curl = 0.0, max_even = 0.0;
    int checked = 0;
    while (checked < 100) {
        std::vector<double> x{gauss(rng) * 2.0, gauss(rng) * 2.0};
        double r = std::hypot(x[0], x[1]);
        if (r < 0.5 || r > 5.0) continue;
        bool clear = true;
        for (const auto& [nu, w] : dv.stencil().weights)
            if (std::hypot(x[0] - nu[0], x[1] - nu[1]) < 0.1) clear = false;
        if (!clear) continue;
        ++checked;

        auto m = dv.eval(x);
        std::vector<double> neg{-x[0], -x[1]};
        auto mn = dv.eval(neg);
        for (std::size_t i = 0; i < m.a.size(); ++i)
            max_even = std::max(max_even, std::abs(m.a[i] - mn.a[i]));

        for (int j = 0; j < 2; ++j) {
            double div = 0.0, ds = 0.0;
            for (int i = 0; i < 2; ++i) {
                auto at = [&](double off, int axis) {
                    auto p = x;
                    p[static_cast<std::size_t>(axis)] += off;
                    return dv.eval(p).at(i, j);
                };
                double di = (-at(2 * step, i) + 8 * at(step, i) - 8 * at(-step, i) +
                             at(-2 * step, i)) /
                            (12 * step);
                div += di;
                ds += std::abs(di);
            }
            max_div = std::max(max_div, std::abs(div) / std::max(ds, 1e-8));

            auto atc = [&](double off, int axis, int i) {
                auto p = x;
                p[static_cast<std::size_t>(axis)] += off;
                return cl.eval(p).at(i, j);
            };
            double d10 = (-atc(2 * step, 0, 1) + 8 * atc(step, 0, 1) - 8 * atc(-step, 0, 1) +
                          atc(-2 * step, 0, 1)) /
                         (12 * step);
            double d01 = (-atc(2 * step, 1, 0) + 8 * atc(step, 1, 0) - 8 * atc(-step, 1, 0) +
                          atc(-2 * step, 1, 0)) /
                         (12 * step);
            max_curl = std::max(max_curl, std::abs(d10 - d01) /
                                              std::max(std::abs(d10) + std::abs(d01), 1e-8));
        }
    }

    std::vector<KernelSpec> variants{
        KernelSpec::curl_free(2, 2, 2, 0, 1, 1), KernelSpec::curl_free(2, 2, 2, 1, 0, 1),
        KernelSpec::curl_free(2, 2, 2, 0, 1, 0), KernelSpec::curl_free(2, 2, 2, 0, 0, 1)};
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double max_hat = 0.0;
    int t = 0;
    while (t < 20) {
        std::vector<double> w{u(rng), u(rng)};
        if (w[0] * w[0] + w[1] * w[1] < 1e-2) continue;
        ++t;
        auto ref = kernel_hat(variants[0], w);
        for (std::size_t v = 1; v < variants.size(); ++v) {
            auto mm = kernel_hat(variants[v], w);
            for (std::size_t i = 0; i < mm.a.size(); ++i)
                max_hat = std::max(max_hat, std::abs(mm.a[i] - ref.a[i]));
        }
    }
    bool pass = max_div <= 1e-6 && max_curl <= 1e-6 && max_even <= 1e-12 && max_hat <= 1e-10;
    report(4, "kernel structure identities", pass,
           fmt("div res %.1e, curl res %.1e <= 1e-6; evenness %.1e <= 1e-12; "
               "curl-variant hats %.1e <= 1e-10",
               max_div, max_curl, max_even, max_hat));
}

// Criterion 5: oracle equivalence.
void criterion5() {
    ExperimentConfig cfg;
    cfg.experiment = "validate";
    cfg.suites = {"oracle"};
    auto rep = run_validate(cfg);
    double fft_div = 0, fft_curl = 0;
    bool monotone = false;
    for (const auto& e : rep.entries) {
        if (e.name == "fft_div_exact") fft_div = e.measured;
        if (e.name == "fft_curl_exact") fft_curl = e.measured;
        if (e.name == "qi_vs_fft_monotone") monotone = e.pass;
    }
    bool pass = fft_div <= 1e-10 && fft_curl <= 1e-10 && monotone;
    report(5, "oracle equivalence", pass,
           fmt("fft part errors %.1e / %.1e <= 1e-10; qi-vs-fft monotone over "
               "h in {1/16,1/32,1/64}: %s",
               fft_div, fft_curl, monotone ? "yes" : "no"));
}

// Criterion 6: convolution lemma check (quadrature-limited slope >= 3).
void criterion6() {
    auto fw = builtin_field("ws_full");
    auto fd = builtin_field("ws_div");
    std::vector<std::vector<double>> pts{
        {5.8, 6.33}, {6.3, 5.83}, {6.7, 5.43}, {6.1, 6.21}, {5.9, 5.77}};
    std::vector<double> hs, es;
    for (double H : {0.2, 0.1, 0.05}) {
        const double R = 14.0;
        int M = static_cast<int>(std::ceil(2.0 * R / (0.2 * H)));
        double acc = 0.0;
        for (const auto& x : pts) {
            auto res = dense_convolution(KernelSpec::divergence_free(2, 2, 2), H,
                                         fw.value, x, {R, M});
            auto want = fd.value(x);
            for (std::size_t s = 0; s < 2; ++s) {
                double e = res.value[s] - want[s];
                acc += e * e;
            }
        }
        hs.push_back(H);
        es.push_back(std::sqrt(acc / (2.0 * pts.size())));
    }
    double slope = fit_loglog_slope(hs, es, 3);
    report(6, "convolution lemma check", slope >= 3.0,
           fmt("rms errors %.2e / %.2e / %.2e at H = 0.2/0.1/0.05; slope %.3f >= 3",
               es[0], es[1], es[2], slope));
}

// Criterion 7: exact-math unit suite.
void criterion7() {
    bool pass = true;
    std::string detail;

    auto f13 = fundamental_constant(1, 3);
    auto f12 = fundamental_constant(1, 2);
    auto f22 = fundamental_constant(2, 2);
    bool consts = std::abs(f13.E.to_double() + 1.0 / (4 * pi)) < 1e-15 &&
                  std::abs(f12.E.to_double() - 1.0 / (2 * pi)) < 1e-15 &&
                  std::abs(f22.E.to_double() - 1.0 / (8 * pi)) < 1e-15;
    pass = pass && consts;
    detail += fmt("constants %s; ", consts ? "exact" : "WRONG");

    auto a = rabut_coefficients(3);
    bool rab = a[0] == Rational(1) && a[1] == Rational(-1, 12) && a[2] == Rational(1, 90);
    pass = pass && rab;
    detail += fmt("rabut %s; ", rab ? "exact" : "WRONG");

    bool stencils = true;
    for (int d = 1; d <= 3; ++d)
        for (int ell = 1; ell <= 4; ++ell)
            for (int k = 1; k <= 4; ++k) {
                auto st = expand_stencil(build_q(d, ell, k));
                if (st.weight_sum() != 0 || !st.is_symmetric()) stencils = false;
            }
    pass = pass && stencils;
    detail += fmt("stencil sums/symmetry %s; ", stencils ? "exact" : "WRONG");

    std::mt19937 rng(99);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> radius(0.5, 2.0);
    std::uniform_int_distribution<int> mp(0, 2), rp(-2, 3), lp(0, 1), cf(1, 5);
    double max_fd_dev = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<RadialTerm> ts;
        for (int t = 0; t < 3; ++t) {
            RadialTerm rt;
            rt.coeff = coeff_rat(Rational(cf(rng)));
            rt.mono = {mp(rng), mp(rng)};
            rt.rpow = rp(rng);
            rt.logpow = lp(rng);
            ts.push_back(rt);
        }
        RadialExpr e(2, std::move(ts));
        int axis = trial % 2;
        RadialExpr de = differentiate(e, axis);
        std::vector<double> x{gauss(rng), gauss(rng)};
        double nrm = std::hypot(x[0], x[1]);
        double r = radius(rng);
        x[0] *= r / nrm;
        x[1] *= r / nrm;
        const double s = 1e-5;
        auto xp = x, xm = x;
        xp[static_cast<std::size_t>(axis)] += s;
        xm[static_cast<std::size_t>(axis)] -= s;
        double fd = (evaluate(e, xp) - evaluate(e, xm)) / (2 * s);
        double ex = evaluate(de, x);
        max_fd_dev = std::max(max_fd_dev,
                              std::abs(ex - fd) / std::max({std::abs(ex), std::abs(fd), 1.0}));
    }
    pass = pass && max_fd_dev <= 1e-6;
    detail += fmt("derivative-vs-FD %.1e <= 1e-6", max_fd_dev);

    report(7, "exact-math unit suite", pass, detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite (%d worker threads)\n", worker_count());
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
}
