#ifndef HODGEQI_RATIONAL_HPP
#define HODGEQI_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "hodgeqi/common.hpp"

namespace hodgeqi {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rat_factorial(int n) {
    Rational r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Rational rat_pow2(int n) {
    boost::multiprecision::cpp_int v = 1;
    v <<= n;
    return Rational(v);
}

// Exact coefficient q * pi^pi_pow.  All coefficients produced by the
// fundamental-solution constructors carry the same pi power for a fixed
// dimension, so sums stay exact.
struct Coeff {
    Rational value = 0;
    int pi_pow = 0;

    bool is_zero() const { return value == 0; }

    double to_double() const {
        if (value == 0) return 0.0;
        return hodgeqi::to_double(value) * ipow(pi, pi_pow);
    }

    Coeff operator-() const { return {-value, pi_pow}; }

    Coeff& operator*=(const Rational& r) {
        value *= r;
        return *this;
    }

    Coeff operator*(const Rational& r) const { return {value * r, pi_pow}; }

    Coeff operator*(const Coeff& o) const { return {value * o.value, pi_pow + o.pi_pow}; }

    friend bool operator==(const Coeff& a, const Coeff& b) {
        if (a.value == 0 && b.value == 0) return true;
        return a.value == b.value && a.pi_pow == b.pi_pow;
    }
};

inline Coeff coeff_rat(Rational v) { return {std::move(v), 0}; }

}  // namespace hodgeqi

#endif  // HODGEQI_RATIONAL_HPP
