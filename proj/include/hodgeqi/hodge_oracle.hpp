#ifndef HODGEQI_HODGE_ORACLE_HPP
#define HODGEQI_HODGE_ORACLE_HPP

// Independent reference implementations: the Fourier-multiplier Helmholtz-
// Hodge projection on periodic grids, and a dense-quadrature convolution of a
// field with a scaled matrix kernel.  Both are deliberately slow and exact
// oracles; the DFT is the naive O(N^2)-per-axis transform (every grid in use
// has N <= 128).

#include <complex>

#include "hodgeqi/grid_field.hpp"
#include "hodgeqi/matrix_kernel.hpp"

namespace hodgeqi {

enum class HodgePart { div, curl };

struct SpectralField {
    int dim = 0;
    std::vector<int> n;                                  // grid size per axis
    std::vector<double> period;                          // box lengths
    std::vector<std::vector<std::complex<double>>> coeff;  // per component

    std::size_t num_modes() const {
        std::size_t m = 1;
        for (int v : n) m *= static_cast<std::size_t>(v);
        return m;
    }
};

namespace detail {

// one naive DFT along `axis` of a complex array laid out like GridField nodes
inline void dft_axis(std::vector<std::complex<double>>& a, const std::vector<int>& n,
                     int axis, bool inverse) {
    const int d = static_cast<int>(n.size());
    const int na = n[static_cast<std::size_t>(axis)];
    std::size_t stride = 1;
    for (int s = axis + 1; s < d; ++s) stride *= static_cast<std::size_t>(n[static_cast<std::size_t>(s)]);
    std::size_t lines = a.size() / static_cast<std::size_t>(na);

    std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(na) *
                                              static_cast<std::size_t>(na));
    const double sgn = inverse ? 1.0 : -1.0;
    for (int k = 0; k < na; ++k)
        for (int j = 0; j < na; ++j) {
            double ph = sgn * 2.0 * pi * k * j / na;
            twiddle[static_cast<std::size_t>(k) * na + j] = {std::cos(ph), std::sin(ph)};
        }

    std::vector<std::complex<double>> line(static_cast<std::size_t>(na));
    for (std::size_t l = 0; l < lines; ++l) {
        // map line index to the base offset of the 1-D slice
        std::size_t block = l / stride, rem = l % stride;
        std::size_t base = block * stride * static_cast<std::size_t>(na) + rem;
        for (int j = 0; j < na; ++j) line[static_cast<std::size_t>(j)] = a[base + static_cast<std::size_t>(j) * stride];
        for (int k = 0; k < na; ++k) {
            std::complex<double> acc(0.0, 0.0);
            const std::complex<double>* tw = twiddle.data() + static_cast<std::size_t>(k) * na;
            for (int j = 0; j < na; ++j) acc += tw[j] * line[static_cast<std::size_t>(j)];
            a[base + static_cast<std::size_t>(k) * stride] =
                inverse ? acc / static_cast<double>(na) : acc;
        }
    }
}

}  // namespace detail

// Forward DFT of a periodic GridField (extents = N per axis; the node at
// origin + N h wraps around, so the field must NOT duplicate the endpoint).
inline SpectralField dft_forward(const GridField& g) {
    g.validate();
    SpectralField sf;
    sf.dim = g.dim;
    sf.n = g.extents;
    sf.period.resize(static_cast<std::size_t>(g.dim));
    for (int s = 0; s < g.dim; ++s)
        sf.period[static_cast<std::size_t>(s)] = g.h * g.extents[static_cast<std::size_t>(s)];
    sf.coeff.assign(static_cast<std::size_t>(g.dim), {});
    for (int c = 0; c < g.dim; ++c) {
        auto& a = sf.coeff[static_cast<std::size_t>(c)];
        a.resize(g.num_nodes());
        for (std::size_t i = 0; i < g.num_nodes(); ++i) a[i] = g.value_at(i)[c];
        for (int axis = 0; axis < g.dim; ++axis) detail::dft_axis(a, sf.n, axis, false);
    }
    return sf;
}

inline GridField dft_inverse(const SpectralField& sf, const GridField& like) {
    GridField out = like;
    std::vector<std::vector<std::complex<double>>> work = sf.coeff;
    for (int c = 0; c < sf.dim; ++c)
        for (int axis = 0; axis < sf.dim; ++axis)
            detail::dft_axis(work[static_cast<std::size_t>(c)], sf.n, axis, true);
    for (std::size_t i = 0; i < out.num_nodes(); ++i)
        for (int c = 0; c < sf.dim; ++c)
            out.value_at(i)[c] = work[static_cast<std::size_t>(c)][i].real();
    return out;
}

// Applies the multiplier (I - w w^T/||w||^2) (div) or w w^T/||w||^2 (curl) at
// every discrete frequency.  The zero frequency (the mean) goes wholly to the
// div part: constants are divergence-free.
inline GridField fft_project(const GridField& g, HodgePart part) {
    g.validate();
    if (g.dim < 1) throw invalid_argument_error("fft_project: bad field");
    SpectralField sf = dft_forward(g);
    const int d = sf.dim;

    std::vector<int> kv(static_cast<std::size_t>(d), 0);
    std::vector<double> w(static_cast<std::size_t>(d));
    std::vector<std::complex<double>> fv(static_cast<std::size_t>(d));
    for (std::size_t flat = 0; flat < sf.num_modes(); ++flat) {
        double w2 = 0.0;
        for (int s = 0; s < d; ++s) {
            int k = kv[static_cast<std::size_t>(s)];
            int n = sf.n[static_cast<std::size_t>(s)];
            int kw = (k <= n / 2) ? k : k - n;  // wrapped frequency index
            w[static_cast<std::size_t>(s)] =
                2.0 * pi * kw / sf.period[static_cast<std::size_t>(s)];
            w2 += w[static_cast<std::size_t>(s)] * w[static_cast<std::size_t>(s)];
        }
        for (int c = 0; c < d; ++c) fv[static_cast<std::size_t>(c)] = sf.coeff[static_cast<std::size_t>(c)][flat];
        if (w2 == 0.0) {
            // mean -> div part
            if (part == HodgePart::curl)
                for (int c = 0; c < d; ++c) sf.coeff[static_cast<std::size_t>(c)][flat] = 0.0;
        } else {
            std::complex<double> dot(0.0, 0.0);
            for (int s = 0; s < d; ++s) dot += w[static_cast<std::size_t>(s)] * fv[static_cast<std::size_t>(s)];
            for (int c = 0; c < d; ++c) {
                std::complex<double> curl_part = w[static_cast<std::size_t>(c)] * dot / w2;
                sf.coeff[static_cast<std::size_t>(c)][flat] =
                    (part == HodgePart::curl) ? curl_part
                                              : fv[static_cast<std::size_t>(c)] - curl_part;
            }
        }
        // advance kv
        for (int s = d - 1; s >= 0; --s) {
            if (++kv[static_cast<std::size_t>(s)] < sf.n[static_cast<std::size_t>(s)]) break;
            kv[static_cast<std::size_t>(s)] = 0;
        }
    }
    return dft_inverse(sf, g);
}

// ---- dense-quadrature convolution oracle -------------------------------------

struct QuadSpec {
    double box_halfwidth = 1.0;  // R: integrate over [x-R, x+R]^d
    int nodes_per_axis = 64;     // M
};

struct ConvolutionResult {
    std::vector<double> value;
    double tail_bound = 0.0;  // (R/H)^{-2k} decay-law scale of the dropped tail
};

// Midpoint-rule approximation of int Psi^H(x - t) f(t) dt over the box,
// Psi^H(y) = H^-d Psi(y/H).  Slow by design.
template <typename FieldF>
ConvolutionResult dense_convolution(const KernelSpec& spec, double H, const FieldF& field,
                                    std::span<const double> x, QuadSpec quad) {
    if (quad.nodes_per_axis < 2)
        throw invalid_argument_error("dense_convolution: need M >= 2");
    if (H <= 0) throw invalid_argument_error("dense_convolution: H must be > 0");
    KernelEvaluator kern(spec);
    const int d = spec.dim;
    if (static_cast<int>(x.size()) != d)
        throw invalid_argument_error("dense_convolution: point dim mismatch");

    const double R = quad.box_halfwidth;
    const int M = quad.nodes_per_axis;
    const double step = 2.0 * R / M;
    const double cell = ipow(step, d);
    const double hscale = ipow(1.0 / H, d);

    const CompiledKernel& ck = kern.view(mi_zero(d));
    const int np = ck.n_entries();

    // parallel over the first axis of the quadrature grid
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(M));
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t i0) {
        std::vector<double> acc(static_cast<std::size_t>(d), 0.0);
        std::vector<double> t(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(d));
        std::vector<double> packed(static_cast<std::size_t>(np));
        std::vector<int> iv(static_cast<std::size_t>(d), 0);
        iv[0] = static_cast<int>(i0);
        std::size_t inner = 1;
        for (int s = 1; s < d; ++s) inner *= static_cast<std::size_t>(M);
        for (std::size_t q = 0; q < inner; ++q) {
            for (int s = 0; s < d; ++s) {
                t[static_cast<std::size_t>(s)] =
                    x[static_cast<std::size_t>(s)] - R + (iv[static_cast<std::size_t>(s)] + 0.5) * step;
                y[static_cast<std::size_t>(s)] =
                    (x[static_cast<std::size_t>(s)] - t[static_cast<std::size_t>(s)]) / H;
            }
            if (ck.eval_stencil(y.data(), packed.data())) {
                auto fv = field(t);
                int idx = 0;
                if (spec.variant == KernelVariant::scalar) {
                    for (int i = 0; i < d; ++i)
                        acc[static_cast<std::size_t>(i)] += packed[0] * fv[static_cast<std::size_t>(i)];
                } else {
                    for (int i = 0; i < d; ++i)
                        for (int j = i; j < d; ++j, ++idx) {
                            acc[static_cast<std::size_t>(i)] +=
                                packed[static_cast<std::size_t>(idx)] * fv[static_cast<std::size_t>(j)];
                            if (i != j)
                                acc[static_cast<std::size_t>(j)] +=
                                    packed[static_cast<std::size_t>(idx)] * fv[static_cast<std::size_t>(i)];
                        }
                }
            }
            for (int s = d - 1; s >= 1; --s) {
                if (++iv[static_cast<std::size_t>(s)] < M) break;
                iv[static_cast<std::size_t>(s)] = 0;
            }
        }
        for (auto& v : acc) v *= cell * hscale;
        partial[i0] = std::move(acc);
    });

    ConvolutionResult res;
    res.value.assign(static_cast<std::size_t>(d), 0.0);
    for (const auto& p : partial)
        for (int s = 0; s < d; ++s) res.value[static_cast<std::size_t>(s)] += p[static_cast<std::size_t>(s)];
    res.tail_bound = std::pow(R / H, -2.0 * spec.k);
    return res;
}

}  // namespace hodgeqi

#endif  // HODGEQI_HODGE_ORACLE_HPP
