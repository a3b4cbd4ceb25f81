#ifndef HODGEQI_LATTICE_QI_HPP
#define HODGEQI_LATTICE_QI_HPP

// Schoenberg-form quasi-interpolation on uniform lattices:
//
//     Q_h f(x) = sum_j Psi(x/h - j) f(jh),
//
// with derivatives D^alpha Q_h f = h^{-|alpha|} sum_j (D^alpha Psi)(x/h - j) f(jh).
//
// For truncation mode `all` the sum is evaluated in the algebraically
// identical rearranged form sum_m E(x/h - m) (q(diff) f)(m): the difference
// stencil is folded into the data once per lattice (E = the operator-matrix
// entries without the stencil), which removes a |stencil| factor from the per
// point cost.  Radius mode keeps the direct per-sample form.

#include <memory>

#include "hodgeqi/grid_field.hpp"
#include "hodgeqi/matrix_kernel.hpp"

namespace hodgeqi {

struct Truncation {
    enum class Mode { all, radius };
    Mode mode = Mode::all;
    double radius_lattice_units = 0.0;
    double tail_tol = 1e-10;

    // Decay-law default: psi = O(r^-(d+2k)) gives radius ~ tol^(-1/(d+2k)).
    static double default_radius(double tail_tol, int dim, int k) {
        return std::ceil(std::pow(tail_tol, -1.0 / (dim + 2 * k)));
    }

    static Truncation all(double tail_tol = 1e-10) { return {Mode::all, 0.0, tail_tol}; }
    static Truncation radius(double r, double tail_tol = 1e-10) {
        return {Mode::radius, r, tail_tol};
    }
};

struct QiValue {
    std::vector<double> v;
    bool boundary_warning = false;  // closer to the hull edge than the tail radius
    bool perturbed = false;         // point nudged off a singular lattice coincidence
};

class QuasiInterpolant {
  public:
    QuasiInterpolant(std::shared_ptr<const KernelEvaluator> kernel, GridField data,
                     Truncation trunc = Truncation::all())
        : kernel_(std::move(kernel)), data_(std::move(data)), trunc_(trunc) {
        data_.validate();
        if (data_.dim != kernel_->dim())
            throw invalid_argument_error("QuasiInterpolant: kernel/data dim mismatch");
        if (trunc_.mode == Truncation::Mode::radius && trunc_.radius_lattice_units < 1.0)
            throw invalid_argument_error("QuasiInterpolant: radius must be >= 1 lattice unit");
        warn_radius_ = Truncation::default_radius(trunc_.tail_tol, data_.dim,
                                                  kernel_->spec().k);
        if (trunc_.mode == Truncation::Mode::all) build_convolved_data();
    }

    const GridField& data() const { return data_; }
    const KernelEvaluator& kernel() const { return *kernel_; }
    const Truncation& truncation() const { return trunc_; }

    QiValue evaluate(std::span<const double> x, const MultiIndex& alpha) const {
        const int d = data_.dim;
        if (static_cast<int>(x.size()) != d)
            throw invalid_argument_error("QuasiInterpolant: point dim mismatch");
        std::vector<double> z(static_cast<std::size_t>(d));
        for (int s = 0; s < d; ++s)
            z[static_cast<std::size_t>(s)] =
                (x[static_cast<std::size_t>(s)] - data_.origin[static_cast<std::size_t>(s)]) /
                data_.h;

        QiValue out;
        out.boundary_warning = near_hull_boundary(z);
        const CompiledKernel& ck = kernel_->view(alpha);
        if (!accumulate(ck, z, &out.v)) {
            // deterministic nudge off the singular lattice coincidence
            for (auto& v : z) v += 1e-9;
            out.perturbed = true;
            if (!accumulate(ck, z, &out.v))
                throw nonremovable_singularity("evaluate_qi: singular after perturbation");
        }
        const int ao = mi_order(alpha);
        if (ao > 0) {
            double scale = ipow(1.0 / data_.h, ao);
            for (auto& v : out.v) v *= scale;
        }
        return out;
    }

    QiValue evaluate(std::span<const double> x) const {
        return evaluate(x, mi_zero(data_.dim));
    }

    std::vector<QiValue> evaluate_many(const std::vector<std::vector<double>>& points,
                                       const MultiIndex& alpha) const {
        std::vector<QiValue> out(points.size());
        kernel_->view(alpha);  // compile before the parallel region
        parallel_for(points.size(),
                     [&](std::size_t i) { out[i] = evaluate(points[i], alpha); });
        return out;
    }

  private:
    bool near_hull_boundary(const std::vector<double>& z) const {
        for (int s = 0; s < data_.dim; ++s) {
            double lo = z[static_cast<std::size_t>(s)];
            double hi = (data_.extents[static_cast<std::size_t>(s)] - 1) -
                        z[static_cast<std::size_t>(s)];
            if (lo < -1e-12 || hi < -1e-12) return true;  // outside the hull
            double margin = (trunc_.mode == Truncation::Mode::radius)
                                ? trunc_.radius_lattice_units
                                : warn_radius_;
            if (lo < margin || hi < margin) return true;
        }
        return false;
    }

    // mode all: g(m) = sum_nu w_nu f(m - nu), zero-extended
    void build_convolved_data() {
        const int d = data_.dim;
        const int R = kernel_->stencil().radius();
        conv_extents_.resize(static_cast<std::size_t>(d));
        for (int s = 0; s < d; ++s)
            conv_extents_[static_cast<std::size_t>(s)] =
                data_.extents[static_cast<std::size_t>(s)] + 2 * R;
        conv_offset_ = R;

        std::size_t n = 1;
        for (int e : conv_extents_) n *= static_cast<std::size_t>(e);
        conv_values_.assign(n * static_cast<std::size_t>(d), 0.0);

        std::vector<std::pair<std::vector<int>, double>> st;
        for (const auto& [nu, w] : kernel_->stencil().weights)
            st.emplace_back(nu, to_double(w));

        std::vector<int> mv(static_cast<std::size_t>(d), 0);
        std::vector<int> jv(static_cast<std::size_t>(d), 0);
        for (std::size_t flat = 0; flat < n; ++flat) {
            double* out = conv_values_.data() + flat * static_cast<std::size_t>(d);
            for (const auto& [nu, w] : st) {
                bool inside = true;
                for (int s = 0; s < d; ++s) {
                    int j = mv[static_cast<std::size_t>(s)] - conv_offset_ -
                            nu[static_cast<std::size_t>(s)];
                    if (j < 0 || j >= data_.extents[static_cast<std::size_t>(s)]) {
                        inside = false;
                        break;
                    }
                    jv[static_cast<std::size_t>(s)] = j;
                }
                if (!inside) continue;
                const double* f = data_.value_at(data_.node_flat(jv));
                for (int s = 0; s < d; ++s) out[s] += w * f[s];
            }
            // advance mv over conv grid
            for (int s = d - 1; s >= 0; --s) {
                if (++mv[static_cast<std::size_t>(s)] < conv_extents_[static_cast<std::size_t>(s)])
                    break;
                mv[static_cast<std::size_t>(s)] = 0;
            }
        }
    }

    bool accumulate(const CompiledKernel& ck, const std::vector<double>& z,
                    std::vector<double>* out) const {
        const int d = data_.dim;
        out->assign(static_cast<std::size_t>(d), 0.0);
        std::vector<double> packed(static_cast<std::size_t>(ck.n_entries()));
        std::vector<double> y(static_cast<std::size_t>(d));

        if (trunc_.mode == Truncation::Mode::all) {
            std::size_t n = conv_values_.size() / static_cast<std::size_t>(d);
            std::vector<int> mv(static_cast<std::size_t>(d), 0);
            for (std::size_t flat = 0; flat < n; ++flat) {
                const double* g = conv_values_.data() + flat * static_cast<std::size_t>(d);
                bool nonzero = false;
                for (int s = 0; s < d; ++s) nonzero |= (g[s] != 0.0);
                if (nonzero) {
                    for (int s = 0; s < d; ++s)
                        y[static_cast<std::size_t>(s)] =
                            z[static_cast<std::size_t>(s)] -
                            (mv[static_cast<std::size_t>(s)] - conv_offset_);
                    if (!ck.eval_raw(y.data(), packed.data())) return false;
                    apply_packed(packed, g, out->data());
                }
                for (int s = d - 1; s >= 0; --s) {
                    if (++mv[static_cast<std::size_t>(s)] <
                        conv_extents_[static_cast<std::size_t>(s)])
                        break;
                    mv[static_cast<std::size_t>(s)] = 0;
                }
            }
            return true;
        }

        // radius mode: direct sum over samples inside the ball
        const double rad = trunc_.radius_lattice_units;
        std::vector<int> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
        for (int s = 0; s < d; ++s) {
            lo[static_cast<std::size_t>(s)] = std::max(
                0, static_cast<int>(std::ceil(z[static_cast<std::size_t>(s)] - rad)));
            hi[static_cast<std::size_t>(s)] =
                std::min(data_.extents[static_cast<std::size_t>(s)] - 1,
                         static_cast<int>(std::floor(z[static_cast<std::size_t>(s)] + rad)));
            if (lo[static_cast<std::size_t>(s)] > hi[static_cast<std::size_t>(s)])
                throw empty_support("evaluate_qi: no sample in the truncation ball");
        }
        std::size_t included = 0;
        std::vector<int> jv = lo;
        while (true) {
            double dist2 = 0.0;
            for (int s = 0; s < d; ++s) {
                double dz = z[static_cast<std::size_t>(s)] - jv[static_cast<std::size_t>(s)];
                dist2 += dz * dz;
            }
            if (dist2 <= rad * rad) {
                ++included;
                for (int s = 0; s < d; ++s)
                    y[static_cast<std::size_t>(s)] =
                        z[static_cast<std::size_t>(s)] - jv[static_cast<std::size_t>(s)];
                if (!ck.eval_stencil(y.data(), packed.data())) return false;
                apply_packed(packed, data_.value_at(data_.node_flat(jv)), out->data());
            }
            int s = d - 1;
            for (; s >= 0; --s) {
                if (++jv[static_cast<std::size_t>(s)] <= hi[static_cast<std::size_t>(s)]) break;
                jv[static_cast<std::size_t>(s)] = lo[static_cast<std::size_t>(s)];
            }
            if (s < 0) break;
        }
        if (included == 0) throw empty_support("evaluate_qi: no sample in the truncation ball");
        return true;
    }

    // out_i += sum_j M_ij f_j with M in packed symmetric (or scalar) form
    void apply_packed(const std::vector<double>& packed, const double* f, double* out) const {
        const int d = data_.dim;
        if (kernel_->spec().variant == KernelVariant::scalar) {
            for (int i = 0; i < d; ++i) out[i] += packed[0] * f[i];
            return;
        }
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j, ++idx) {
                out[i] += packed[static_cast<std::size_t>(idx)] * f[j];
                if (i != j) out[j] += packed[static_cast<std::size_t>(idx)] * f[i];
            }
    }

    std::shared_ptr<const KernelEvaluator> kernel_;
    GridField data_;
    Truncation trunc_;
    double warn_radius_ = 0.0;
    std::vector<int> conv_extents_;
    int conv_offset_ = 0;
    std::vector<double> conv_values_;
};

// Convenience wrappers for the Helmholtz-Hodge projections.

inline std::vector<QiValue> project_div(const GridField& data, int ell, int k,
                                        const std::vector<std::vector<double>>& eval_points,
                                        const MultiIndex& alpha,
                                        Truncation trunc = Truncation::all()) {
    auto kernel = std::make_shared<KernelEvaluator>(
        KernelSpec::divergence_free(ell, k, data.dim));
    QuasiInterpolant qi(kernel, data, trunc);
    return qi.evaluate_many(eval_points, alpha);
}

inline std::vector<QiValue> project_curl(const GridField& data, int ell, int k,
                                         const std::vector<std::vector<double>>& eval_points,
                                         const MultiIndex& alpha,
                                         Truncation trunc = Truncation::all()) {
    auto kernel =
        std::make_shared<KernelEvaluator>(KernelSpec::curl_free(ell, k, data.dim));
    QuasiInterpolant qi(kernel, data, trunc);
    return qi.evaluate_many(eval_points, alpha);
}

}  // namespace hodgeqi

#endif  // HODGEQI_LATTICE_QI_HPP
