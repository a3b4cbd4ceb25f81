#ifndef HODGEQI_RADIAL_EXPR_HPP
#define HODGEQI_RADIAL_EXPR_HPP

// Exact term algebra for polyharmonic fundamental solutions and their
// derivatives.  Every expression is a finite sum of terms
//
//     c * x^m * r^p * (ln r)^q,   r = ||x||,  q in {0,1},
//
// which is closed under partial differentiation, so all differential
// operators applied to phi_ell are exact.

#include <algorithm>
#include <span>
#include <tuple>
#include <vector>

#include "hodgeqi/common.hpp"
#include "hodgeqi/rational.hpp"

namespace hodgeqi {

struct RadialTerm {
    Coeff coeff;
    MultiIndex mono;  // length == dim
    int rpow = 0;
    int logpow = 0;  // 0 or 1

    int mono_order() const { return mi_order(mono); }

    // Homogeneity degree |m| + p: controls the r -> 0 limit.
    int homogeneity() const { return mono_order() + rpow; }
};

namespace detail {

inline std::tuple<const MultiIndex&, int, int, int> term_key(const RadialTerm& t) {
    return {t.mono, t.rpow, t.logpow, t.coeff.pi_pow};
}

}  // namespace detail

class RadialExpr {
  public:
    static constexpr std::size_t kMaxTerms = 100000;

    RadialExpr() : dim_(1) {}
    explicit RadialExpr(int dim) : dim_(dim) {
        if (dim < 1) throw invalid_argument_error("RadialExpr: dim must be >= 1");
    }
    RadialExpr(int dim, std::vector<RadialTerm> terms) : dim_(dim), terms_(std::move(terms)) {
        if (dim < 1) throw invalid_argument_error("RadialExpr: dim must be >= 1");
        for (const auto& t : terms_)
            if (static_cast<int>(t.mono.size()) != dim_)
                throw invalid_argument_error("RadialExpr: term dim mismatch");
        simplify();
    }

    int dim() const { return dim_; }
    const std::vector<RadialTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(RadialTerm t) {
        if (static_cast<int>(t.mono.size()) != dim_)
            throw invalid_argument_error("RadialExpr: term dim mismatch");
        terms_.push_back(std::move(t));
        simplify();
    }

    RadialExpr operator+(const RadialExpr& o) const {
        if (o.dim_ != dim_) throw invalid_argument_error("RadialExpr: dim mismatch");
        std::vector<RadialTerm> all = terms_;
        all.insert(all.end(), o.terms_.begin(), o.terms_.end());
        return RadialExpr(dim_, std::move(all));
    }

    RadialExpr operator-(const RadialExpr& o) const { return *this + (o * Rational(-1)); }

    RadialExpr operator*(const Rational& r) const {
        std::vector<RadialTerm> ts = terms_;
        for (auto& t : ts) t.coeff *= r;
        return RadialExpr(dim_, std::move(ts));
    }

    // Merges terms with identical (m, p, q) keys and drops zero coefficients.
    // Idempotent; evaluation is invariant under it.
    void simplify() {
        std::sort(terms_.begin(), terms_.end(), [](const RadialTerm& a, const RadialTerm& b) {
            return detail::term_key(a) < detail::term_key(b);
        });
        std::vector<RadialTerm> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && detail::term_key(out.back()) == detail::term_key(t))
                out.back().coeff.value += t.coeff.value;
            else
                out.push_back(std::move(t));
        }
        std::erase_if(out, [](const RadialTerm& t) { return t.coeff.is_zero(); });
        if (out.size() > kMaxTerms)
            throw term_growth_limit("RadialExpr: term count exceeds " +
                                    std::to_string(kMaxTerms));
        terms_ = std::move(out);
    }

  private:
    int dim_;
    std::vector<RadialTerm> terms_;
};

// ---- fundamental solutions --------------------------------------------------

struct FundamentalConstants {
    int ell = 1;
    int dim = 1;
    Coeff C;  // coefficient of ||x||^{2l-d} ln||x||
    Coeff D;  // coefficient of ||x||^{2l-d}
    Coeff E;
};

// E_{l,d} = Gamma(d/2) / (2^l pi^{d/2} (l-1)! prod_{j=0, j != l-d/2}^{l-1} (2l-2j-d)).
// Empty products are 1; for even d the factor at j = l-d/2 (which would vanish)
// is excluded when that index lies in [0, l-1].
inline FundamentalConstants fundamental_constant(int ell, int dim) {
    if (ell < 1) throw invalid_argument_error("fundamental_constant: ell must be >= 1");
    if (dim < 1) throw invalid_argument_error("fundamental_constant: dim must be >= 1");

    Coeff e;
    if (dim % 2 == 0) {
        // Gamma(d/2) = (d/2 - 1)!
        e.value = rat_factorial(dim / 2 - 1);
        e.pi_pow = -dim / 2;
    } else {
        // Gamma(d/2) = (d-2)!! sqrt(pi) / 2^{(d-1)/2}
        Rational dfact = 1;
        for (int i = dim - 2; i >= 1; i -= 2) dfact *= i;
        e.value = dfact / rat_pow2((dim - 1) / 2);
        e.pi_pow = -(dim - 1) / 2;
    }
    e.value /= rat_pow2(ell);
    e.value /= rat_factorial(ell - 1);
    for (int j = 0; j <= ell - 1; ++j) {
        if (dim % 2 == 0 && 2 * j == 2 * ell - dim) continue;
        e.value /= (2 * ell - 2 * j - dim);
    }

    FundamentalConstants fc;
    fc.ell = ell;
    fc.dim = dim;
    fc.E = e;
    if (dim % 2 == 0) {
        fc.C = e;
        fc.D = Coeff{};
    } else {
        fc.C = Coeff{};
        fc.D = e;
    }
    return fc;
}

// phi_ell(x) = ||x||^{2l-d} [C ln||x|| + D].
inline RadialExpr phi_expr(int ell, int dim) {
    FundamentalConstants fc = fundamental_constant(ell, dim);
    std::vector<RadialTerm> terms;
    if (!fc.C.is_zero()) terms.push_back({fc.C, mi_zero(dim), 2 * ell - dim, 1});
    if (!fc.D.is_zero()) terms.push_back({fc.D, mi_zero(dim), 2 * ell - dim, 0});
    return RadialExpr(dim, std::move(terms));
}

// ---- differentiation --------------------------------------------------------

// d/dx_s [c x^m r^p (ln r)^q] =
//   c m_s x^{m-e_s} r^p (ln r)^q + c p x^{m+e_s} r^{p-2} (ln r)^q
//   + c q x^{m+e_s} r^{p-2} (ln r)^{q-1}.
inline RadialExpr differentiate(const RadialExpr& expr, int axis) {
    if (axis < 0 || axis >= expr.dim())
        throw invalid_argument_error("differentiate: axis out of range");
    std::vector<RadialTerm> out;
    out.reserve(expr.terms().size() * 3);
    for (const auto& t : expr.terms()) {
        if (t.mono[axis] > 0) {
            RadialTerm a = t;
            a.coeff *= Rational(t.mono[axis]);
            a.mono[axis] -= 1;
            out.push_back(std::move(a));
        }
        if (t.rpow != 0) {
            RadialTerm b = t;
            b.coeff *= Rational(t.rpow);
            b.mono[axis] += 1;
            b.rpow -= 2;
            out.push_back(std::move(b));
        }
        if (t.logpow > 0) {
            RadialTerm c = t;
            c.coeff *= Rational(t.logpow);
            c.mono[axis] += 1;
            c.rpow -= 2;
            c.logpow -= 1;
            out.push_back(std::move(c));
        }
    }
    return RadialExpr(expr.dim(), std::move(out));
}

inline RadialExpr apply_operator(const RadialExpr& expr, const MultiIndex& alpha,
                                 int max_order = 8) {
    if (static_cast<int>(alpha.size()) != expr.dim())
        throw invalid_argument_error("apply_operator: alpha dim mismatch");
    for (int a : alpha)
        if (a < 0) throw invalid_argument_error("apply_operator: negative order");
    if (mi_order(alpha) > max_order)
        throw depth_limit_exceeded("apply_operator: |alpha| exceeds cap " +
                                   std::to_string(max_order));
    RadialExpr cur = expr;
    for (int s = 0; s < expr.dim(); ++s)
        for (int i = 0; i < alpha[s]; ++i) cur = differentiate(cur, s);
    return cur;
}

inline RadialExpr laplacian(const RadialExpr& expr) {
    RadialExpr acc(expr.dim());
    for (int s = 0; s < expr.dim(); ++s) acc = acc + differentiate(differentiate(expr, s), s);
    return acc;
}

// ---- evaluation -------------------------------------------------------------

namespace detail {

// Continuous-extension value of one term as r -> 0.  Terms with |m|+p > 0
// vanish; the constant part survives; log terms and negative homogeneity have
// no limit.
inline bool term_limit_at_origin(const RadialTerm& t, double* out) {
    int s = t.homogeneity();
    if (s > 0) {
        *out = 0.0;
        return true;
    }
    if (s == 0 && t.logpow == 0) {
        *out = t.coeff.to_double();
        return true;
    }
    return false;
}

}  // namespace detail

inline double evaluate(const RadialExpr& expr, std::span<const double> point,
                       double origin_tol = 1e-12) {
    if (static_cast<int>(point.size()) != expr.dim())
        throw invalid_argument_error("evaluate: point dim mismatch");
    if (origin_tol <= 0) throw invalid_argument_error("evaluate: origin_tol must be > 0");

    long double r2 = 0.0L;
    for (double x : point) r2 += static_cast<long double>(x) * x;

    if (r2 <= static_cast<long double>(origin_tol) * origin_tol) {
        long double acc = 0.0L;
        for (const auto& t : expr.terms()) {
            double v;
            if (!detail::term_limit_at_origin(t, &v))
                throw nonremovable_singularity(
                    "evaluate: no continuous extension at the origin");
            acc += v;
        }
        return static_cast<double>(acc);
    }

    const long double lnr = 0.5L * std::log(r2);
    const long double r = std::sqrt(r2);
    long double acc = 0.0L;
    for (const auto& t : expr.terms()) {
        long double v = t.coeff.to_double();
        for (int s = 0; s < expr.dim(); ++s)
            for (int i = 0; i < t.mono[s]; ++i) v *= point[s];
        if (t.rpow != 0) {
            int p = t.rpow;
            long double rp;
            if (p % 2 == 0)
                rp = std::pow(r2, static_cast<long double>(p / 2));
            else
                rp = std::pow(r2, static_cast<long double>((p - (p > 0 ? 1 : -1)) / 2)) *
                     (p > 0 ? r : 1.0L / r);
            v *= rp;
        }
        if (t.logpow == 1) v *= lnr;
        acc += v;
    }
    return static_cast<double>(acc);
}

inline double evaluate(const RadialExpr& expr, const std::vector<double>& point,
                       double origin_tol = 1e-12) {
    return evaluate(expr, std::span<const double>(point), origin_tol);
}

}  // namespace hodgeqi

#endif  // HODGEQI_RADIAL_EXPR_HPP
