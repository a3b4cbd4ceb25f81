#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hodgeqi/fields.hpp"
#include "hodgeqi/hodge_oracle.hpp"

using namespace hodgeqi;
using Catch::Approx;

namespace {

GridField periodic_sample(const FieldFn& f, double lo, double len, int n) {
    return GridField::sample({lo, lo}, len / n, {n, n}, f);
}

double rms_diff(const GridField& a, const GridField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double e = a.values[i] - b.values[i];
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(a.values.size()));
}

double rms(const GridField& a) {
    double acc = 0.0;
    for (double v : a.values) acc += v * v;
    return std::sqrt(acc / static_cast<double>(a.values.size()));
}

}  // namespace

TEST_CASE("fft projection reproduces a divergence-free band-limited field") {
    auto f = builtin_field("ws_div");
    GridField g = periodic_sample(f.value, 0.0, 1.0, 64);
    GridField w = fft_project(g, HodgePart::div);
    REQUIRE(rms_diff(w, g) <= 1e-12);
    GridField c = fft_project(g, HodgePart::curl);
    REQUIRE(rms(c) <= 1e-12);
}

TEST_CASE("fft projection annihilates a curl-free field's div part on its period box") {
    auto f = builtin_field("ws_curl");  // period 2 per axis
    GridField g = periodic_sample(f.value, 0.0, 2.0, 64);
    GridField w = fft_project(g, HodgePart::div);
    REQUIRE(rms(w) <= 1e-12);
    GridField c = fft_project(g, HodgePart::curl);
    REQUIRE(rms_diff(c, g) <= 1e-12);
}

TEST_CASE("fft projection splits the combined periodic field exactly") {
    auto d = builtin_field("ws_div");
    auto c = builtin_field("bd_curl");
    FieldFn f = [&](const std::vector<double>& x) {
        auto u = d.value(x);
        auto v = c.value(x);
        return std::vector<double>{u[0] + v[0], u[1] + v[1]};
    };
    GridField g = periodic_sample(f, 0.0, 1.0, 64);
    GridField dd = periodic_sample(d.value, 0.0, 1.0, 64);
    GridField cc = periodic_sample(c.value, 0.0, 1.0, 64);
    REQUIRE(rms_diff(fft_project(g, HodgePart::div), dd) <= 1e-10);
    REQUIRE(rms_diff(fft_project(g, HodgePart::curl), cc) <= 1e-10);
}

TEST_CASE("multiplier complementarity, idempotence, orthogonality") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    // random band-limited periodic field on [0,1]^2, N = 24 (not a power of 2)
    std::vector<double> a(18), b(18);
    for (auto& v : a) v = amp(rng);
    for (auto& v : b) v = amp(rng);
    FieldFn f = [&](const std::vector<double>& x) {
        double u = 0, v = 0;
        int idx = 0;
        for (int k1 = -1; k1 <= 1; ++k1)
            for (int k2 = -1; k2 <= 1; ++k2) {
                double ph = 2 * pi * (k1 * x[0] + k2 * x[1]);
                u += a[static_cast<std::size_t>(idx)] * std::cos(ph) +
                     a[static_cast<std::size_t>(idx + 9)] * std::sin(ph);
                v += b[static_cast<std::size_t>(idx)] * std::cos(ph) +
                     b[static_cast<std::size_t>(idx + 9)] * std::sin(ph);
                ++idx;
            }
        return std::vector<double>{u, v};
    };
    GridField g = periodic_sample(f, 0.0, 1.0, 24);
    GridField w = fft_project(g, HodgePart::div);
    GridField p = fft_project(g, HodgePart::curl);

    GridField sum = w;
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += p.values[i];
    REQUIRE(rms_diff(sum, g) <= 1e-12);

    REQUIRE(rms_diff(fft_project(w, HodgePart::div), w) <= 1e-12);
    REQUIRE(rms_diff(fft_project(p, HodgePart::curl), p) <= 1e-12);

    double dot = 0.0, nw = 0.0, np_ = 0.0;
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        dot += w.values[i] * p.values[i];
        nw += w.values[i] * w.values[i];
        np_ += p.values[i] * p.values[i];
    }
    REQUIRE(std::abs(dot) <= 1e-10 * std::sqrt(nw * np_));
}

TEST_CASE("zero field convolves to zero") {
    auto zero = [](const std::vector<double>&) { return std::vector<double>{0.0, 0.0}; };
    auto res = dense_convolution(KernelSpec::divergence_free(2, 2, 2), 0.1, zero,
                                 std::vector<double>{6.0, 6.0}, {2.0, 32});
    REQUIRE(res.value[0] == 0.0);
    REQUIRE(res.value[1] == 0.0);
}

TEST_CASE("scalar convolution error shrinks like H^2k") {
    // Scalar psi decays like r^-(d+2k): a box of ~20 kernel units suffices.
    FieldFn f = [](const std::vector<double>& x) {
        double v = std::sin(0.9 * x[0]) * std::cos(0.7 * x[1]);
        return std::vector<double>{v, v};
    };
    std::vector<double> x{0.3, -0.1};
    std::vector<double> hs, es;
    for (double H : {0.28, 0.14, 0.07}) {
        auto res = dense_convolution(KernelSpec::scalar(2, 2, 2), H, f, x, {20.0 * H, 200});
        double want = f(x)[0];
        hs.push_back(std::log(H));
        es.push_back(std::log(std::abs(res.value[0] - want) + 1e-16));
    }
    double slope = (es.front() - es.back()) / (hs.front() - hs.back());
    INFO("fitted convolution slope " << slope);
    REQUIRE(slope >= 2.0 * 2 - 0.5);
    REQUIRE(slope <= 2.0 * 2 + 1.5);
}

TEST_CASE("curl-kernel convolution annihilates a div-free field") {
    // Matrix projector kernels are nonlocal (entries decay like r^-d), so the
    // box is a fixed physical size spanning whole field periods and the error
    // floors at its truncation level.
    auto d = builtin_field("ws_div");
    std::vector<double> x{6.4, 6.35};
    for (double H : {0.2, 0.1}) {
        int M = static_cast<int>(std::ceil(2.0 * 6.0 / (0.2 * H)));
        auto res = dense_convolution(KernelSpec::curl_free(2, 2, 2), H, d.value, x,
                                     {6.0, M});
        double mag = std::hypot(res.value[0], res.value[1]);
        INFO("H = " << H << " mag " << mag);
        REQUIRE(mag <= 5e-3);
    }
}

TEST_CASE("div-kernel convolution converges to the div part on the combined field") {
    auto fw = builtin_field("ws_full");
    auto fd = builtin_field("ws_div");
    std::vector<double> x{5.8, 6.33};
    auto want = fd.value(x);
    std::vector<double> hs, es;
    for (double H : {0.2, 0.1}) {
        const double R = 14.0;
        int M = static_cast<int>(std::ceil(2.0 * R / (0.2 * H)));
        auto res = dense_convolution(KernelSpec::divergence_free(2, 2, 2), H, fw.value,
                                     x, {R, M});
        hs.push_back(std::log(H));
        es.push_back(std::log(std::hypot(res.value[0] - want[0], res.value[1] - want[1])));
    }
    double slope = (es.front() - es.back()) / (hs.front() - hs.back());
    INFO("fitted slope " << slope);
    REQUIRE(slope >= 3.0);
}
