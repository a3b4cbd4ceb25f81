#ifndef HODGEQI_MATRIX_KERNEL_HPP
#define HODGEQI_MATRIX_KERNEL_HPP

// Polyharmonic-spline matrix kernels
//
//     Psi_{eta,beta,gamma} = q_{d,l,k}(central diff)
//                            [eta Lap I - beta grad grad^T](grad grad^T)^gamma
//                            phi_{l+gamma+max(eta,beta)},
//
// with divergence-free (1,1,0), curl-free ((0,1,1),(1,0,1),(0,1,0),(0,0,1),
// the first and third up to the documented -1, folded in here so all curl
// variants act as the same projector), and harmonic (1,1,1) special cases.
//
// The net spatial prefactor is +1 relative to q(diff)phi: the (-1)^l the
// source attaches to the spatial form cancels against the parity of the
// fundamental solution's transform, and psi_hat(0) = 1 is what the Strang-Fix
// conditions require.  See stencil.hpp's symbol().

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>

#include "hodgeqi/radial_expr.hpp"
#include "hodgeqi/stencil.hpp"

namespace hodgeqi {

struct SquareMat {
    int d = 0;
    std::vector<double> a;

    SquareMat() = default;
    explicit SquareMat(int dim) : d(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * d + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * d + j]; }

    SquareMat& operator+=(const SquareMat& o) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }
};

enum class KernelVariant { scalar, general, div, curl, harmonic };

struct KernelSpec {
    int eta = 0, beta = 0, gamma = 0;
    int ell = 1, k = 1;
    int dim = 2;
    KernelVariant variant = KernelVariant::general;

    static KernelSpec divergence_free(int ell, int k, int dim) {
        return validated({1, 1, 0, ell, k, dim, KernelVariant::div});
    }
    // Default curl variant (0,0,1); the source's Theorem 2 proof works with it.
    static KernelSpec curl_free(int ell, int k, int dim, int eta = 0, int beta = 0,
                                int gamma = 1) {
        return validated({eta, beta, gamma, ell, k, dim, KernelVariant::curl});
    }
    static KernelSpec harmonic(int ell, int k, int dim) {
        return validated({1, 1, 1, ell, k, dim, KernelVariant::harmonic});
    }
    static KernelSpec general(int eta, int beta, int gamma, int ell, int k, int dim) {
        return validated({eta, beta, gamma, ell, k, dim, KernelVariant::general});
    }
    static KernelSpec scalar(int ell, int k, int dim) {
        return validated({0, 0, 0, ell, k, dim, KernelVariant::scalar});
    }

    // phi order l + gamma + max(eta, beta); plain l for the scalar kernel.
    int phi_order() const {
        if (variant == KernelVariant::scalar) return ell;
        return ell + gamma + std::max(eta, beta);
    }

    // -1 for the sign-flipped curl variants, +1 otherwise.
    int fold_sign() const {
        if (variant == KernelVariant::curl && beta == 1) return -1;
        return 1;
    }

    static KernelSpec validated(KernelSpec s) {
        auto in01 = [](int v) { return v == 0 || v == 1; };
        if (!in01(s.eta) || !in01(s.beta) || !in01(s.gamma))
            throw invalid_argument_error("KernelSpec: eta, beta, gamma must be in {0,1}");
        if (s.ell < 1) throw invalid_argument_error("KernelSpec: ell must be >= 1");
        if (s.k < 1 || s.k > s.ell)
            throw invalid_argument_error("KernelSpec: need 1 <= k <= ell");
        if (s.variant == KernelVariant::scalar) {
            if (s.dim < 1) throw invalid_argument_error("KernelSpec: dim must be >= 1");
            s.eta = s.beta = s.gamma = 0;
            return s;
        }
        if (s.dim < 2) throw invalid_argument_error("KernelSpec: dim must be >= 2");
        if (s.eta + s.beta + s.gamma == 0)
            throw invalid_argument_error("KernelSpec: eta + beta + gamma must be nonzero");
        switch (s.variant) {
            case KernelVariant::div:
                if (s.eta != 1 || s.beta != 1 || s.gamma != 0)
                    throw invalid_argument_error("KernelSpec: div requires (1,1,0)");
                break;
            case KernelVariant::harmonic:
                if (s.eta != 1 || s.beta != 1 || s.gamma != 1)
                    throw invalid_argument_error("KernelSpec: harmonic requires (1,1,1)");
                break;
            case KernelVariant::curl: {
                bool ok = (s.eta == 0 && s.beta == 1 && s.gamma == 1) ||
                          (s.eta == 1 && s.beta == 0 && s.gamma == 1) ||
                          (s.eta == 0 && s.beta == 1 && s.gamma == 0) ||
                          (s.eta == 0 && s.beta == 0 && s.gamma == 1);
                if (!ok)
                    throw invalid_argument_error(
                        "KernelSpec: curl requires one of (0,1,1),(1,0,1),(0,1,0),(0,0,1)");
                break;
            }
            default:
                break;
        }
        return s;
    }
};

// ---- compiled evaluation ----------------------------------------------------

// Flat double-precision form of the symmetric entry matrix, one fused term per
// (monomial, rpow) pair: value = x^m r^p (c_plain + c_log ln r).
class CompiledKernel {
  public:
    struct FTerm {
        double c_plain = 0.0, c_log = 0.0;
        int rpow = 0;
        int mono_begin = 0;  // index into mono_, stride dim
    };

    CompiledKernel(int dim, const std::vector<RadialExpr>& packed_entries,
                   const Stencil& stencil, double origin_tol)
        : dim_(dim), origin_tol2_(origin_tol * origin_tol) {
        n_entries_ = static_cast<int>(packed_entries.size());
        entry_begin_.push_back(0);
        for (const auto& e : packed_entries) {
            std::map<std::pair<MultiIndex, int>, std::pair<double, double>> fused;
            for (const auto& t : e.terms()) {
                auto& slot = fused[{t.mono, t.rpow}];
                (t.logpow ? slot.second : slot.first) += t.coeff.to_double();
            }
            for (const auto& [key, cs] : fused) {
                FTerm ft;
                ft.c_plain = cs.first;
                ft.c_log = cs.second;
                ft.rpow = key.second;
                ft.mono_begin = static_cast<int>(mono_.size());
                mono_.insert(mono_.end(), key.first.begin(), key.first.end());
                if (ft.c_log != 0.0) needs_log_ = true;
                if (ft.rpow % 2 != 0) needs_sqrt_ = true;
                terms_.push_back(ft);
            }
            entry_begin_.push_back(static_cast<int>(terms_.size()));

            // Continuous-extension limit of the whole entry at the origin.
            double lim = 0.0;
            bool ok = true;
            for (const auto& t : e.terms()) {
                double v;
                if (!detail::term_limit_at_origin(t, &v)) {
                    ok = false;
                    break;
                }
                lim += v;
            }
            limit_ok_.push_back(ok ? 1 : 0);
            limit_value_.push_back(ok ? lim : 0.0);
        }
        for (const auto& [nu, w] : stencil.weights) {
            offsets_.push_back(to_double(w));
            offset_nu_.insert(offset_nu_.end(), nu.begin(), nu.end());
        }
    }

    int dim() const { return dim_; }
    int n_entries() const { return n_entries_; }
    std::size_t n_offsets() const { return offsets_.size(); }

    // Entry values at a raw displacement (no stencil).  Returns false when the
    // point coincides with the singular center and some entry has no limit.
    bool eval_raw(const double* z, double* out) const {
        double r2 = 0.0;
        for (int s = 0; s < dim_; ++s) r2 += z[s] * z[s];
        if (r2 <= origin_tol2_) {
            for (int e = 0; e < n_entries_; ++e) {
                if (!limit_ok_[e]) return false;
                out[e] = limit_value_[e];
            }
            return true;
        }
        const double lnr = needs_log_ ? 0.5 * std::log(r2) : 0.0;
        const double r = needs_sqrt_ ? std::sqrt(r2) : 0.0;
        for (int e = 0; e < n_entries_; ++e) {
            double acc = 0.0;
            for (int ti = entry_begin_[e]; ti < entry_begin_[e + 1]; ++ti) {
                const FTerm& t = terms_[static_cast<std::size_t>(ti)];
                double v = t.c_plain + t.c_log * lnr;
                const int* m = mono_.data() + t.mono_begin;
                for (int s = 0; s < dim_; ++s)
                    for (int i = 0; i < m[s]; ++i) v *= z[s];
                if (t.rpow != 0) {
                    int p = t.rpow;
                    double rp = (p % 2 == 0) ? ipow(r2, p / 2)
                                             : ipow(r2, (p - (p > 0 ? 1 : -1)) / 2) *
                                                   (p > 0 ? r : 1.0 / r);
                    v *= rp;
                }
                acc += v;
            }
            out[e] = acc;
        }
        return true;
    }

    // Stencil-combined values: sum_nu w_nu entries(z - nu).
    bool eval_stencil(const double* z, double* out) const {
        for (int e = 0; e < n_entries_; ++e) out[e] = 0.0;
        std::vector<double> y(static_cast<std::size_t>(dim_));
        std::vector<double> tmp(static_cast<std::size_t>(n_entries_));
        for (std::size_t o = 0; o < offsets_.size(); ++o) {
            const int* nu = offset_nu_.data() + o * static_cast<std::size_t>(dim_);
            for (int s = 0; s < dim_; ++s) y[static_cast<std::size_t>(s)] = z[s] - nu[s];
            if (!eval_raw(y.data(), tmp.data())) return false;
            for (int e = 0; e < n_entries_; ++e)
                out[e] += offsets_[o] * tmp[static_cast<std::size_t>(e)];
        }
        return true;
    }

  private:
    int dim_;
    int n_entries_ = 0;
    double origin_tol2_;
    bool needs_log_ = false;
    bool needs_sqrt_ = false;
    std::vector<FTerm> terms_;
    std::vector<int> entry_begin_;
    std::vector<int> mono_;
    std::vector<double> offsets_;
    std::vector<int> offset_nu_;
    std::vector<char> limit_ok_;
    std::vector<double> limit_value_;
};

// ---- the evaluator ----------------------------------------------------------

class KernelEvaluator {
  public:
    static constexpr int kAlphaCap = 8;
    static constexpr double kOriginTol = 1e-12;

    explicit KernelEvaluator(const KernelSpec& spec)
        : spec_(KernelSpec::validated(spec)),
          q_(build_q(spec_.dim, spec_.ell, spec_.k)),
          stencil_(expand_stencil(q_)) {
        const RadialExpr phi = phi_expr(spec_.phi_order(), spec_.dim);
        const Rational fold(spec_.fold_sign());

        if (spec_.variant == KernelVariant::scalar) {
            entries_.push_back(phi);
            return;
        }

        const int d = spec_.dim;
        // Operator matrix entries:
        //   gamma = 0:              eta Lap delta_ij - beta d_i d_j
        //   gamma = 1, eta+beta>0:  (eta - beta) Lap d_i d_j
        //   gamma = 1, eta=beta=0:  d_i d_j   (the bracket degenerates to I)
        RadialExpr lap = laplacian(phi);
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                RadialExpr dij = differentiate(differentiate(phi, i), j);
                RadialExpr entry(d);
                if (spec_.gamma == 0) {
                    if (i == j && spec_.eta) entry = entry + lap;
                    if (spec_.beta) entry = entry - dij;
                } else if (spec_.eta + spec_.beta > 0) {
                    int c = spec_.eta - spec_.beta;
                    if (c != 0) entry = laplacian(dij) * Rational(c);
                } else {
                    entry = dij;
                }
                entries_.push_back(entry * fold);
            }
        }
    }

    const KernelSpec& spec() const { return spec_; }
    const MultiPoly& q() const { return q_; }
    const Stencil& stencil() const { return stencil_; }
    int dim() const { return spec_.dim; }
    int sign() const { return spec_.fold_sign(); }

    // Symmetric entry (i, j) of the operator matrix applied to phi.
    const RadialExpr& entry(int i, int j) const {
        if (spec_.variant == KernelVariant::scalar) return entries_[0];
        if (i > j) std::swap(i, j);
        const int d = spec_.dim;
        return entries_[static_cast<std::size_t>(i * d - i * (i - 1) / 2 + (j - i))];
    }

    int n_packed() const { return static_cast<int>(entries_.size()); }

    // Compiled view for D^alpha applied to every entry; built once, cached.
    const CompiledKernel& view(const MultiIndex& alpha) const {
        if (static_cast<int>(alpha.size()) != spec_.dim)
            throw invalid_argument_error("KernelEvaluator: alpha dim mismatch");
        if (mi_order(alpha) > kAlphaCap)
            throw depth_limit_exceeded("KernelEvaluator: |alpha| exceeds cap");
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = views_.find(alpha);
        if (it == views_.end()) {
            std::vector<RadialExpr> dentries;
            dentries.reserve(entries_.size());
            for (const auto& e : entries_)
                dentries.push_back(apply_operator(e, alpha, kAlphaCap));
            it = views_
                     .emplace(alpha, std::make_unique<CompiledKernel>(
                                         spec_.dim, dentries, stencil_, kOriginTol))
                     .first;
        }
        return *it->second;
    }

    // Full d x d matrix of sum_nu w_nu (D^alpha entries)(x - nu).
    SquareMat eval(std::span<const double> x, const MultiIndex& alpha) const {
        if (static_cast<int>(x.size()) != spec_.dim)
            throw invalid_argument_error("KernelEvaluator: point dim mismatch");
        const CompiledKernel& ck = view(alpha);
        std::vector<double> packed(static_cast<std::size_t>(ck.n_entries()));
        if (!ck.eval_stencil(x.data(), packed.data()))
            throw nonremovable_singularity(
                "eval_kernel: singular entry at a lattice coincidence");
        return unpack(packed);
    }

    SquareMat eval(std::span<const double> x) const { return eval(x, mi_zero(spec_.dim)); }

    SquareMat unpack(const std::vector<double>& packed) const {
        const int d = spec_.dim;
        SquareMat m(d);
        if (spec_.variant == KernelVariant::scalar) {
            for (int i = 0; i < d; ++i) m.at(i, i) = packed[0];
            return m;
        }
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j, ++idx) {
                m.at(i, j) = packed[static_cast<std::size_t>(idx)];
                m.at(j, i) = packed[static_cast<std::size_t>(idx)];
            }
        return m;
    }

  private:
    KernelSpec spec_;
    MultiPoly q_;
    Stencil stencil_;
    std::vector<RadialExpr> entries_;  // packed upper triangle (or single scalar)
    mutable std::mutex mutex_;
    mutable std::map<MultiIndex, std::unique_ptr<CompiledKernel>> views_;
};

inline KernelEvaluator build_kernel(const KernelSpec& spec) { return KernelEvaluator(spec); }

inline SquareMat eval_kernel(const KernelEvaluator& ev, std::span<const double> x,
                             const MultiIndex& alpha) {
    return ev.eval(x, alpha);
}

// psi_{l,k} = q_{d,l,k}(central diff) phi_l and its derivatives.
inline double eval_scalar_psi(int ell, int k, std::span<const double> x,
                              const MultiIndex& alpha) {
    static std::mutex m;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<KernelEvaluator>> cache;
    const int dim = static_cast<int>(x.size());
    const KernelEvaluator* ev;
    {
        std::lock_guard<std::mutex> lock(m);
        auto key = std::make_tuple(ell, k, dim);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache
                     .emplace(key, std::make_unique<KernelEvaluator>(
                                       KernelSpec::scalar(ell, k, dim)))
                     .first;
        ev = it->second.get();
    }
    const CompiledKernel& ck = ev->view(alpha);
    double out;
    if (!ck.eval_stencil(x.data(), &out))
        throw nonremovable_singularity("eval_scalar_psi: singular at lattice point");
    return out;
}

inline double eval_scalar_psi(int ell, int k, std::span<const double> x) {
    return eval_scalar_psi(ell, k, x, mi_zero(static_cast<int>(x.size())));
}

// ---- Fourier transform --------------------------------------------------------

// Psi_hat(w) = psi_hat(w) [eta ||w||^2 I - beta w w^T](w w^T)^gamma
//              / ||w||^{2(gamma+max(eta,beta))},
// which reduces to psi_hat (I - P) for div and psi_hat P for every folded curl
// variant, P = w w^T / ||w||^2.  The denominator exponent printed in the
// source is dimensionally inconsistent with its own specializations; this is
// the exponent that reproduces both.
inline SquareMat kernel_hat(const KernelSpec& spec_in, std::span<const double> omega) {
    KernelSpec spec = KernelSpec::validated(spec_in);
    const int d = spec.dim;
    if (static_cast<int>(omega.size()) != d)
        throw invalid_argument_error("kernel_hat: omega dim mismatch");

    double w2 = 0.0;
    for (double w : omega) w2 += w * w;

    if (spec.variant == KernelVariant::harmonic) return SquareMat(d);
    if (w2 == 0.0) {
        if (spec.variant == KernelVariant::scalar) {
            SquareMat m(d);
            for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
            return m;
        }
        throw direction_undefined("kernel_hat: projector undefined at omega = 0");
    }

    const double psi = symbol(build_q(d, spec.ell, spec.k), spec.ell, omega);
    SquareMat m(d);
    if (spec.variant == KernelVariant::scalar) {
        for (int i = 0; i < d; ++i) m.at(i, i) = psi;
        return m;
    }

    // B = eta ||w||^2 I - beta w w^T, or I when eta = beta = 0.
    SquareMat B(d);
    if (spec.eta + spec.beta == 0) {
        for (int i = 0; i < d; ++i) B.at(i, i) = 1.0;
    } else {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) B.at(i, j) = -spec.beta * omega[i] * omega[j];
            B.at(i, i) += spec.eta * w2;
        }
    }
    if (spec.gamma == 1) {
        // B <- B (w w^T) = (B w) w^T
        std::vector<double> bw(static_cast<std::size_t>(d), 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) bw[static_cast<std::size_t>(i)] += B.at(i, j) * omega[j];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) B.at(i, j) = bw[static_cast<std::size_t>(i)] * omega[j];
    }
    const double denom = ipow(w2, spec.gamma + std::max(spec.eta, spec.beta));
    const double scale = spec.fold_sign() * psi / denom;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = scale * B.at(i, j);
    return m;
}

// ---- Strang-Fix validation ----------------------------------------------------

struct StrangFixReport {
    int ell = 0, k = 0, dim = 0, max_order = 0, j_radius = 0;
    double fd_step = 0.0;
    double origin_value_dev = 0.0;    // |psi_hat(small-ray average) - 1|
    double origin_deriv_dev = 0.0;    // max FD derivative magnitude, 1 <= |a| <= max_order
    double lattice_value_dev = 0.0;   // max |psi_hat(2 pi j)|
    double lattice_deriv_dev = 0.0;   // max FD derivative magnitude there
    double decay_exponent = 0.0;      // fitted far-field exponent of psi
    double decay_expected = 0.0;      // -(d + 2k); the decay law is an upper
                                      // bound, so faster decay also passes
    bool pass = false;

    struct Thresholds {
        double origin_value = 1e-6;
        double lattice_value = 1e-14;
        double deriv = 1e-5;
        double decay_band = 0.3;
    };
};

namespace detail {

// Central-difference weights (O(step^2)) for d^n/dt^n, offsets in [-2, 2].
inline std::vector<std::pair<int, double>> central_fd_weights(int n) {
    switch (n) {
        case 0: return {{0, 1.0}};
        case 1: return {{-1, -0.5}, {1, 0.5}};
        case 2: return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
        case 3: return {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
        case 4: return {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
        default: throw invalid_argument_error("central_fd_weights: order > 4");
    }
}

// Tensor-composed central FD of a multivariate function.
template <typename F>
double fd_derivative(const F& f, const std::vector<double>& x0, const MultiIndex& alpha,
                     double step) {
    std::vector<std::vector<std::pair<int, double>>> axis;
    axis.reserve(alpha.size());
    for (int n : alpha) axis.push_back(central_fd_weights(n));
    double acc = 0.0;
    std::vector<std::size_t> idx(alpha.size(), 0);
    while (true) {
        double w = 1.0;
        std::vector<double> x = x0;
        for (std::size_t s = 0; s < alpha.size(); ++s) {
            auto [off, cw] = axis[s][idx[s]];
            w *= cw;
            x[s] += off * step;
        }
        acc += w * f(x);
        std::size_t s = 0;
        for (; s < alpha.size(); ++s) {
            if (++idx[s] < axis[s].size()) break;
            idx[s] = 0;
        }
        if (s == alpha.size()) break;
    }
    return acc / ipow(step, mi_order(alpha));
}

inline void enumerate_multi_indices(int dim, int max_total, const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex a(dim, 0);
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == dim) {
            fn(a);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            a[static_cast<std::size_t>(axis)] = v;
            rec(axis + 1, remaining - v);
        }
        a[static_cast<std::size_t>(axis)] = 0;
    };
    rec(0, max_total);
}

}  // namespace detail

inline StrangFixReport check_strang_fix(int ell, int k, int dim, int max_order, int j_radius,
                                        double fd_step = 1e-3,
                                        StrangFixReport::Thresholds thr = {}) {
    if (max_order > 2 * k - 1)
        throw invalid_argument_error("check_strang_fix: max_order must be <= 2k-1");
    StrangFixReport rep;
    rep.ell = ell;
    rep.k = k;
    rep.dim = dim;
    rep.max_order = max_order;
    rep.j_radius = j_radius;
    rep.fd_step = fd_step;
    rep.decay_expected = -(dim + 2 * k);

    const MultiPoly q = build_q(dim, ell, k);
    auto psi_hat = [&](const std::vector<double>& w) { return symbol(q, ell, w); };

    // psi_hat(0) via a small-radius ray average.
    {
        std::mt19937 rng(12345);
        std::normal_distribution<double> gauss;
        double acc = 0.0;
        const int n_rays = 8;
        for (int i = 0; i < n_rays; ++i) {
            std::vector<double> u(static_cast<std::size_t>(dim));
            double nrm = 0.0;
            for (auto& v : u) {
                v = gauss(rng);
                nrm += v * v;
            }
            nrm = std::sqrt(nrm);
            for (auto& v : u) v *= 1e-3 / nrm;
            acc += psi_hat(u);
        }
        rep.origin_value_dev = std::abs(acc / n_rays - 1.0);
    }

    // Derivatives at the origin and values/derivatives at 2 pi j,
    // over all j with ||j||_inf <= j_radius, j != 0.
    std::vector<std::vector<double>> lattice_pts;
    {
        std::vector<int> j(static_cast<std::size_t>(dim), -j_radius);
        while (true) {
            bool nonzero = false;
            for (int v : j) nonzero |= (v != 0);
            if (nonzero) {
                std::vector<double> w(static_cast<std::size_t>(dim));
                for (int s = 0; s < dim; ++s) w[static_cast<std::size_t>(s)] = 2.0 * pi * j[static_cast<std::size_t>(s)];
                lattice_pts.push_back(std::move(w));
            }
            int s = 0;
            for (; s < dim; ++s) {
                if (++j[static_cast<std::size_t>(s)] <= j_radius) break;
                j[static_cast<std::size_t>(s)] = -j_radius;
            }
            if (s == dim) break;
        }
    }

    for (const auto& w : lattice_pts)
        rep.lattice_value_dev = std::max(rep.lattice_value_dev, std::abs(psi_hat(w)));

    std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
    detail::enumerate_multi_indices(dim, max_order, [&](const MultiIndex& a) {
        if (mi_order(a) == 0) return;
        rep.origin_deriv_dev = std::max(
            rep.origin_deriv_dev, std::abs(detail::fd_derivative(psi_hat, origin, a, fd_step)));
        for (const auto& w : lattice_pts)
            rep.lattice_deriv_dev = std::max(
                rep.lattice_deriv_dev, std::abs(detail::fd_derivative(psi_hat, w, a, fd_step)));
    });

    // Far-field decay exponent of psi along fixed rays, RMS over directions.
    // The stencil sum cancels ~10 digits out here, so accumulate the exact
    // expression in extended precision instead of the compiled fast path.
    {
        const RadialExpr phi = phi_expr(ell, dim);
        const Stencil st = expand_stencil(q);
        auto psi_ld = [&](const std::vector<double>& x) {
            long double acc = 0.0L;
            std::vector<double> y(x.size());
            for (const auto& [nu, w] : st.weights) {
                for (std::size_t s = 0; s < x.size(); ++s) y[s] = x[s] - nu[s];
                acc += static_cast<long double>(to_double(w)) * evaluate(phi, y);
            }
            return static_cast<double>(acc);
        };

        std::mt19937 rng(777);
        std::normal_distribution<double> gauss;
        const int n_dirs = 8;
        std::vector<std::vector<double>> dirs;
        for (int i = 0; i < n_dirs; ++i) {
            std::vector<double> u(static_cast<std::size_t>(dim));
            double nrm = 0.0;
            for (auto& v : u) {
                v = gauss(rng);
                nrm += v * v;
            }
            nrm = std::sqrt(nrm);
            for (auto& v : u) v /= nrm;
            dirs.push_back(std::move(u));
        }
        std::vector<double> radii, vals;
        for (double r = 9.0; r <= 34.0; r *= 1.3) {
            double ms = 0.0;
            for (const auto& u : dirs) {
                std::vector<double> x(static_cast<std::size_t>(dim));
                for (int s = 0; s < dim; ++s) x[static_cast<std::size_t>(s)] = r * u[static_cast<std::size_t>(s)];
                double v = psi_ld(x);
                ms += v * v;
            }
            radii.push_back(std::log(r));
            vals.push_back(0.5 * std::log(ms / n_dirs));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(radii.size());
        for (std::size_t i = 0; i < radii.size(); ++i) {
            sx += radii[i];
            sy += vals[i];
            sxx += radii[i] * radii[i];
            sxy += radii[i] * vals[i];
        }
        rep.decay_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    rep.pass = rep.origin_value_dev <= thr.origin_value &&
               rep.lattice_value_dev <= thr.lattice_value &&
               rep.origin_deriv_dev <= thr.deriv && rep.lattice_deriv_dev <= thr.deriv &&
               (thr.decay_band <= 0.0 ||
                rep.decay_exponent - rep.decay_expected <= thr.decay_band);
    return rep;
}

}  // namespace hodgeqi

#endif  // HODGEQI_MATRIX_KERNEL_HPP
