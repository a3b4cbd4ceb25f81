#ifndef HODGEQI_MATERN_HPP
#define HODGEQI_MATERN_HPP

// C^8 Matern scalar kernel (nu = 9/2), normalized to 1 at the origin:
//
//     phi(r) = e^{-t} (105 + 105 t + 45 t^2 + 10 t^3 + t^4) / 105,  t = eps r.
//
// The radial derivative operator D_r = (1/r) d/dr maps it to
// (D_r^n phi)(r) = eps^{2n} e^{-t} R_n(t) with polynomial R_n obtained from
// R_{n+1} = (R_n' - R_n)/t; the division is exact for n <= 3, which is the
// half-integer smoothness doing its job.  n = 4 is the most any |alpha| <= 2
// derivative of a second-order kernel block needs.

#include <array>

#include "hodgeqi/rational.hpp"

namespace hodgeqi {

inline constexpr int kMaternMaxDr = 4;

namespace detail {

inline const std::array<std::vector<double>, kMaternMaxDr + 1>& matern_radial_polys() {
    static const auto polys = [] {
        std::array<std::vector<double>, kMaternMaxDr + 1> out;
        std::vector<Rational> r{Rational(105, 105), Rational(105, 105), Rational(45, 105),
                                Rational(10, 105), Rational(1, 105)};
        auto store = [&out](int n, const std::vector<Rational>& p) {
            out[static_cast<std::size_t>(n)].resize(p.size());
            for (std::size_t i = 0; i < p.size(); ++i)
                out[static_cast<std::size_t>(n)][i] = to_double(p[i]);
        };
        store(0, r);
        for (int n = 1; n <= kMaternMaxDr; ++n) {
            // (r' - r) / t, exact
            std::vector<Rational> num(r.size(), Rational(0));
            for (std::size_t i = 0; i + 1 < r.size(); ++i) num[i] += Rational(static_cast<int>(i + 1)) * r[i + 1];
            for (std::size_t i = 0; i < r.size(); ++i) num[i] -= r[i];
            if (num[0] != 0)
                throw error("matern_radial_polys: inexact division, D_r order too high");
            std::vector<Rational> next(num.begin() + 1, num.end());
            if (next.empty()) next.push_back(Rational(0));
            r = next;
            store(n, r);
        }
        return out;
    }();
    return polys;
}

inline double horner(const std::vector<double>& p, double t) {
    double acc = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
    return acc;
}

}  // namespace detail

// phi(r); 1 at r = 0, strictly decreasing to 0.
inline double matern_c8(double r, double eps) {
    if (r < 0) throw invalid_argument_error("matern_c8: r must be >= 0");
    if (eps <= 0) throw invalid_argument_error("matern_c8: eps must be > 0");
    const double t = eps * r;
    return std::exp(-t) * detail::horner(detail::matern_radial_polys()[0], t);
}

// (D_r^n phi)(r) = eps^{2n} e^{-t} R_n(t), n = 0..4; smooth through r = 0.
inline double matern_dr(int n, double r, double eps) {
    if (n < 0 || n > kMaternMaxDr)
        throw invalid_argument_error("matern_dr: order out of range");
    const double t = eps * r;
    return ipow(eps, 2 * n) * std::exp(-t) *
           detail::horner(detail::matern_radial_polys()[static_cast<std::size_t>(n)], t);
}

}  // namespace hodgeqi

#endif  // HODGEQI_MATERN_HPP
