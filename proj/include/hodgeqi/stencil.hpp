#ifndef HODGEQI_STENCIL_HPP
#define HODGEQI_STENCIL_HPP

// Expansion of q_{d,l,k}(central difference) into a finite offset/weight map
// on Z^d, plus the Fourier symbol of the resulting polyharmonic spline.

#include <complex>
#include <map>
#include <vector>

#include "hodgeqi/multipoly.hpp"

namespace hodgeqi {

struct Stencil {
    int dim = 1;
    std::map<MultiIndex, Rational> weights;  // offset nu -> weight, no zeros

    void add(const MultiIndex& nu, const Rational& w) {
        if (w == 0) return;
        auto it = weights.find(nu);
        if (it == weights.end()) {
            weights.emplace(nu, w);
        } else {
            it->second += w;
            if (it->second == 0) weights.erase(it);
        }
    }

    Rational weight_sum() const {
        Rational s = 0;
        for (const auto& [nu, w] : weights) s += w;
        return s;
    }

    bool is_symmetric() const {
        for (const auto& [nu, w] : weights) {
            MultiIndex neg = nu;
            for (int& v : neg) v = -v;
            auto it = weights.find(neg);
            if (it == weights.end() || it->second != w) return false;
        }
        return true;
    }

    int radius() const {
        int r = 0;
        for (const auto& [nu, w] : weights)
            for (int v : nu) r = std::max(r, std::abs(v));
        return r;
    }
};

namespace detail {

// Convolution product of two stencils on Z^d.
inline Stencil convolve(const Stencil& a, const Stencil& b) {
    Stencil out;
    out.dim = a.dim;
    for (const auto& [na, wa] : a.weights)
        for (const auto& [nb, wb] : b.weights) {
            MultiIndex n = na;
            for (int s = 0; s < a.dim; ++s) n[s] += nb[s];
            out.add(n, wa * wb);
        }
    return out;
}

inline Stencil axis_difference(int dim, int axis) {
    Stencil st;
    st.dim = dim;
    MultiIndex nu(dim, 0);
    st.add(nu, -2);
    nu[axis] = 1;
    st.add(nu, 1);
    nu[axis] = -1;
    st.add(nu, 1);
    return st;
}

}  // namespace detail

// Substitute x_s -> (central difference along axis s) in q and expand.
inline Stencil expand_stencil(const MultiPoly& q) {
    Stencil out;
    out.dim = q.dim;
    for (const auto& [mono, c] : q.terms) {
        Stencil prod;
        prod.dim = q.dim;
        prod.add(MultiIndex(q.dim, 0), 1);
        for (int s = 0; s < q.dim; ++s) {
            Stencil axis = detail::axis_difference(q.dim, s);
            for (int i = 0; i < mono[s]; ++i) prod = detail::convolve(prod, axis);
        }
        for (const auto& [nu, w] : prod.weights) out.add(nu, w * c);
    }
    return out;
}

// Fourier symbol of psi_{l,k}:
//   psi_hat(w) = (-1)^l q(-4 sin^2(w/2)) / ||w||^{2l},  psi_hat(0) = 1.
// The (-1)^l normalization is forced by the Strang-Fix condition
// psi_hat(0) = 1 (the lowest-degree part of q contributes (-1)^l ||w||^{2l}).
inline double symbol(const MultiPoly& q, int ell, std::span<const double> omega) {
    if (static_cast<int>(omega.size()) != q.dim)
        throw invalid_argument_error("symbol: omega dim mismatch");
    double w2 = 0.0;
    for (double w : omega) w2 += w * w;
    if (w2 == 0.0) return 1.0;
    std::vector<double> u(omega.size());
    for (std::size_t s = 0; s < omega.size(); ++s) {
        double sn = std::sin(0.5 * omega[s]);
        u[s] = -4.0 * sn * sn;
    }
    double num = q.evaluate(u);
    if (ell % 2 == 1) num = -num;
    return num / ipow(w2, ell);
}

inline double symbol(const MultiPoly& q, int ell, const std::vector<double>& omega) {
    return symbol(q, ell, std::span<const double>(omega));
}

// sum_nu w_nu e^{-i nu.omega}; equals (-1)^l symbol * ||omega||^{2l} up to
// roundoff (imaginary part vanishes by symmetry).
inline std::complex<double> stencil_symbol(const Stencil& st, std::span<const double> omega) {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [nu, w] : st.weights) {
        double phase = 0.0;
        for (int s = 0; s < st.dim; ++s) phase -= nu[s] * omega[s];
        acc += to_double(w) * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
}

}  // namespace hodgeqi

#endif  // HODGEQI_STENCIL_HPP
