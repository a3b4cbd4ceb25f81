#ifndef HODGEQI_FIELDS_HPP
#define HODGEQI_FIELDS_HPP

// Built-in 2-D test fields with known Helmholtz-Hodge parts and closed-form
// x1-derivatives.
//
//   ws_div : d(x) = [ sin(2 pi x2) sin^2(pi x1), -sin(2 pi x1) sin^2(pi x2) ]
//   ws_curl: c(x) = grad(-cos(pi x1) sin(pi x2))         (period 2 per axis)
//   bd_div : d(x) = [ sin(8 pi x2) sin^2(4 pi x1), -sin(8 pi x1) sin^2(4 pi x2) ]
//   bd_curl: c(x) = grad(-cos(2 pi x1) sin(2 pi x2))     (period 1 per axis)
//   *_full : sum of the corresponding parts

#include <functional>
#include <string>

#include "hodgeqi/common.hpp"

namespace hodgeqi {

using FieldFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct BuiltinField {
    std::string name;
    int dim = 2;
    double period = 0.0;  // common period per axis of the full field
    FieldFn value;        // f
    FieldFn value_dx1;    // df/dx1
    FieldFn div_part;     // w
    FieldFn div_part_dx1;
    FieldFn curl_part;    // grad p
    FieldFn curl_part_dx1;

    // derivative order a in {0,1} applied along x1
    std::vector<double> eval(const std::vector<double>& x, int a) const {
        return a == 0 ? value(x) : value_dx1(x);
    }
    std::vector<double> eval_div(const std::vector<double>& x, int a) const {
        return a == 0 ? div_part(x) : div_part_dx1(x);
    }
    std::vector<double> eval_curl(const std::vector<double>& x, int a) const {
        return a == 0 ? curl_part(x) : curl_part_dx1(x);
    }
};

namespace detail {

inline FieldFn fsum(FieldFn a, FieldFn b) {
    return [a = std::move(a), b = std::move(b)](const std::vector<double>& x) {
        auto u = a(x);
        auto v = b(x);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += v[i];
        return u;
    };
}

inline FieldFn fzero() {
    return [](const std::vector<double>& x) { return std::vector<double>(x.size(), 0.0); };
}

}  // namespace detail

inline BuiltinField builtin_field(const std::string& name) {
    using std::cos;
    using std::sin;
    using V = std::vector<double>;

    FieldFn ws_d = [](const V& x) {
        return V{sin(2 * pi * x[1]) * sin(pi * x[0]) * sin(pi * x[0]),
                 -sin(2 * pi * x[0]) * sin(pi * x[1]) * sin(pi * x[1])};
    };
    FieldFn ws_d_dx1 = [](const V& x) {
        return V{sin(2 * pi * x[1]) * pi * sin(2 * pi * x[0]),
                 -2 * pi * cos(2 * pi * x[0]) * sin(pi * x[1]) * sin(pi * x[1])};
    };
    FieldFn ws_c = [](const V& x) {
        return V{pi * sin(pi * x[0]) * sin(pi * x[1]),
                 -pi * cos(pi * x[0]) * cos(pi * x[1])};
    };
    FieldFn ws_c_dx1 = [](const V& x) {
        return V{pi * pi * cos(pi * x[0]) * sin(pi * x[1]),
                 pi * pi * sin(pi * x[0]) * cos(pi * x[1])};
    };

    FieldFn bd_d = [](const V& x) {
        return V{sin(8 * pi * x[1]) * sin(4 * pi * x[0]) * sin(4 * pi * x[0]),
                 -sin(8 * pi * x[0]) * sin(4 * pi * x[1]) * sin(4 * pi * x[1])};
    };
    FieldFn bd_d_dx1 = [](const V& x) {
        return V{sin(8 * pi * x[1]) * 4 * pi * sin(8 * pi * x[0]),
                 -8 * pi * cos(8 * pi * x[0]) * sin(4 * pi * x[1]) * sin(4 * pi * x[1])};
    };
    FieldFn bd_c = [](const V& x) {
        return V{2 * pi * sin(2 * pi * x[0]) * sin(2 * pi * x[1]),
                 -2 * pi * cos(2 * pi * x[0]) * cos(2 * pi * x[1])};
    };
    FieldFn bd_c_dx1 = [](const V& x) {
        return V{4 * pi * pi * cos(2 * pi * x[0]) * sin(2 * pi * x[1]),
                 4 * pi * pi * sin(2 * pi * x[0]) * cos(2 * pi * x[1])};
    };

    BuiltinField f;
    f.name = name;
    if (name == "ws_div") {
        f.period = 1.0;
        f.value = ws_d;
        f.value_dx1 = ws_d_dx1;
        f.div_part = ws_d;
        f.div_part_dx1 = ws_d_dx1;
        f.curl_part = detail::fzero();
        f.curl_part_dx1 = detail::fzero();
    } else if (name == "ws_curl") {
        f.period = 2.0;
        f.value = ws_c;
        f.value_dx1 = ws_c_dx1;
        f.div_part = detail::fzero();
        f.div_part_dx1 = detail::fzero();
        f.curl_part = ws_c;
        f.curl_part_dx1 = ws_c_dx1;
    } else if (name == "ws_full") {
        f.period = 2.0;
        f.value = detail::fsum(ws_d, ws_c);
        f.value_dx1 = detail::fsum(ws_d_dx1, ws_c_dx1);
        f.div_part = ws_d;
        f.div_part_dx1 = ws_d_dx1;
        f.curl_part = ws_c;
        f.curl_part_dx1 = ws_c_dx1;
    } else if (name == "bd_div") {
        f.period = 0.5;
        f.value = bd_d;
        f.value_dx1 = bd_d_dx1;
        f.div_part = bd_d;
        f.div_part_dx1 = bd_d_dx1;
        f.curl_part = detail::fzero();
        f.curl_part_dx1 = detail::fzero();
    } else if (name == "bd_curl") {
        f.period = 1.0;
        f.value = bd_c;
        f.value_dx1 = bd_c_dx1;
        f.div_part = detail::fzero();
        f.div_part_dx1 = detail::fzero();
        f.curl_part = bd_c;
        f.curl_part_dx1 = bd_c_dx1;
    } else if (name == "bd_full") {
        f.period = 1.0;
        f.value = detail::fsum(bd_d, bd_c);
        f.value_dx1 = detail::fsum(bd_d_dx1, bd_c_dx1);
        f.div_part = bd_d;
        f.div_part_dx1 = bd_d_dx1;
        f.curl_part = bd_c;
        f.curl_part_dx1 = bd_c_dx1;
    } else {
        throw invalid_argument_error("builtin_field: unknown name " + name);
    }
    return f;
}

}  // namespace hodgeqi

#endif  // HODGEQI_FIELDS_HPP
