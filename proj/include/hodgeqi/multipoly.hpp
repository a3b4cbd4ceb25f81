#ifndef HODGEQI_MULTIPOLY_HPP
#define HODGEQI_MULTIPOLY_HPP

// Rabut's polynomials p_{d,l,k} and their truncations q_{d,l,k}, kept as
// exact rational multivariate polynomials.

#include <map>
#include <vector>

#include "hodgeqi/common.hpp"
#include "hodgeqi/rational.hpp"

namespace hodgeqi {

struct MultiPoly {
    int dim = 1;
    std::map<MultiIndex, Rational> terms;  // monomial -> coefficient, no zeros

    void add(const MultiIndex& mono, const Rational& c) {
        if (c == 0) return;
        auto it = terms.find(mono);
        if (it == terms.end()) {
            terms.emplace(mono, c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    int min_total_degree() const {
        int md = -1;
        for (const auto& [m, c] : terms) {
            int deg = mi_order(m);
            if (md < 0 || deg < md) md = deg;
        }
        return md;
    }

    MultiPoly truncated(int max_total_degree) const {
        MultiPoly out;
        out.dim = dim;
        for (const auto& [m, c] : terms)
            if (mi_order(m) <= max_total_degree) out.terms.emplace(m, c);
        return out;
    }

    // Product, dropping every monomial above max_total_degree.  Safe during
    // power iteration because all our factors have minimal degree >= 1.
    MultiPoly multiply_truncated(const MultiPoly& o, int max_total_degree) const {
        MultiPoly out;
        out.dim = dim;
        for (const auto& [ma, ca] : terms) {
            int da = mi_order(ma);
            for (const auto& [mb, cb] : o.terms) {
                if (da + mi_order(mb) > max_total_degree) continue;
                MultiIndex m = ma;
                for (int s = 0; s < dim; ++s) m[s] += mb[s];
                out.add(m, ca * cb);
            }
        }
        return out;
    }

    // Evaluate at a real point (used for the Fourier symbol).
    double evaluate(std::span<const double> x) const {
        double acc = 0.0;
        for (const auto& [m, c] : terms) {
            double v = to_double(c);
            for (int s = 0; s < dim; ++s) v *= ipow(x[s], m[s]);
            acc += v;
        }
        return acc;
    }
};

// a_i = (-1)^i 2 (i!)^2 / (2i+2)!, i = 0..k-1.
inline std::vector<Rational> rabut_coefficients(int k) {
    if (k < 1) throw invalid_argument_error("rabut_coefficients: k must be >= 1");
    std::vector<Rational> a;
    a.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        Rational fi = rat_factorial(i);
        Rational v = 2 * fi * fi / rat_factorial(2 * i + 2);
        if (i % 2 == 1) v = -v;
        a.push_back(v);
    }
    return a;
}

// q_{d,l,k}: expansion of (sum_i a_i sum_s x_s^{i+1})^l keeping total degree
// <= l+k.  At k = 1 the base polynomial is homogeneous of degree l, so the
// truncation is a no-op and q(diff) = (central diff)^l either way; for k > 1
// this reading keeps the k-th correction layer, which measurably improves the
// preasymptotic approximation constants while satisfying the same Strang-Fix
// order 2k.
inline MultiPoly build_q(int dim, int ell, int k) {
    if (dim < 1 || ell < 1 || k < 1)
        throw invalid_argument_error("build_q: dim, ell, k must be >= 1");
    const int max_deg = ell + k;

    MultiPoly base;
    base.dim = dim;
    auto a = rabut_coefficients(k);
    for (int i = 0; i < k; ++i) {
        if (i + 1 > max_deg) break;
        for (int s = 0; s < dim; ++s) {
            MultiIndex m(dim, 0);
            m[s] = i + 1;
            base.add(m, a[static_cast<std::size_t>(i)]);
        }
    }

    MultiPoly q;
    q.dim = dim;
    q.add(MultiIndex(dim, 0), 1);  // start from 1, multiply l times
    for (int i = 0; i < ell; ++i) q = q.multiply_truncated(base, max_deg);
    return q;
}

}  // namespace hodgeqi

#endif  // HODGEQI_MULTIPOLY_HPP
