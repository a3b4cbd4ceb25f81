#ifndef HODGEQI_BOUNDED_SCHEME_HPP
#define HODGEQI_BOUNDED_SCHEME_HPP

// Bounded-domain Helmholtz-Hodge scheme: fit a matrix-valued RBF interpolant
// I f on the boundary ring, form g = f - I f on the whole lattice, and add a
// two-scale quasi-interpolant of g:
//
//     IQ^part_{h,H} f(x) = I^part f(x) + h^d sum_{j in A} Psi^{part,H}(x - jh) g(jh),
//
// with Psi^{part,H}(y) = H^-d Psi^part(y/H) and H = C h^{1/(2k+d-eps)}.

#include "hodgeqi/boundary_interp.hpp"
#include "hodgeqi/hodge_oracle.hpp"
#include "hodgeqi/lattice_qi.hpp"

namespace hodgeqi {

// H = C h^{1/(2k+d-eps)} (the |alpha| = 0 form of the optimal rule).
inline double select_H(double h, int k, int dim, double eps, double C) {
    if (h <= 0 || C <= 0) throw invalid_argument_error("select_H: h, C must be > 0");
    if (eps <= 0 || eps >= 1) throw invalid_argument_error("select_H: need 0 < eps < 1");
    return C * std::pow(h, 1.0 / (2 * k + dim - eps));
}

struct BoundedConfig {
    Box omega;                  // sample domain
    Box V;                      // interior box, strictly inside omega
    double h = 0.1;             // data spacing
    int ell = 2, k = 2;         // kernel indices
    double C = 0.05;            // H-rule constant
    double eps_rule = 1e-3;     // epsilon in the H-rule exponent
    double matern_shape = 0.0;  // 0 -> default_ring_shape(h)
    double H_override = 0.0;    // 0 -> select_H(h, k, dim, eps_rule, C)
    double eval_margin = 0.0;   // optional margin next to the boundary for eval meshes

    int dim() const { return omega.dim(); }

    double scale_H() const {
        return H_override > 0.0 ? H_override : select_H(h, k, dim(), eps_rule, C);
    }

    // Default shape is domain-scaled: the interpolant's div/curl split (not
    // its fit) limits the scheme, and a kernel of fixed physical width keeps
    // that split improving across an h-sweep.
    double shape() const {
        if (matern_shape > 0.0) return matern_shape;
        double side = omega.hi[0] - omega.lo[0];
        for (int s = 1; s < omega.dim(); ++s) side = std::min(side, omega.width(s));
        return 5.0 / side;
    }

    void validate() const {
        if (omega.dim() < 1 || V.dim() != omega.dim())
            throw invalid_argument_error("BoundedConfig: domain dim mismatch");
        for (int s = 0; s < omega.dim(); ++s) {
            if (!(V.lo[static_cast<std::size_t>(s)] > omega.lo[static_cast<std::size_t>(s)] &&
                  V.hi[static_cast<std::size_t>(s)] < omega.hi[static_cast<std::size_t>(s)]))
                throw invalid_argument_error("BoundedConfig: V must be strictly inside omega");
        }
        if (h <= 0) throw invalid_argument_error("BoundedConfig: h must be > 0");
        if (ell < 1 || k < 1 || k > ell)
            throw invalid_argument_error("BoundedConfig: need 1 <= k <= ell");
    }
};

class LerayEvaluator {
  public:
    LerayEvaluator(BoundaryInterpolant interp, std::shared_ptr<const KernelEvaluator> kern,
                   GridField gdata, double h, double H, HodgePart part)
        : interp_(std::move(interp)),
          kern_(std::move(kern)),
          gdata_(std::move(gdata)),
          h_(h),
          H_(H),
          part_(part) {}

    double data_spacing() const { return h_; }
    double kernel_scale() const { return H_; }
    const BoundaryInterpolant& interpolant() const { return interp_; }
    const GridField& residual_data() const { return gdata_; }

    // I^part f + Q^part_{h,H} g
    std::vector<double> eval(std::span<const double> x, const MultiIndex& alpha) const {
        auto out = interp_.eval(x, part_ == HodgePart::div ? InterpPart::div : InterpPart::curl,
                                alpha);
        auto q = eval_qpart(x, alpha);
        for (std::size_t s = 0; s < out.size(); ++s) out[s] += q[s];
        return out;
    }

    std::vector<double> eval(std::span<const double> x) const {
        return eval(x, mi_zero(gdata_.dim));
    }

    // the two-scale quasi-interpolation term alone:
    //   h^d H^{-d-|alpha|} sum_j (D^alpha Psi)((x - jh)/H) g(jh)
    std::vector<double> eval_qpart(std::span<const double> x, const MultiIndex& alpha) const {
        const int d = gdata_.dim;
        const CompiledKernel& ck = kern_->view(alpha);
        std::vector<double> z(static_cast<std::size_t>(d));
        for (int s = 0; s < d; ++s) z[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(s)];
        std::vector<double> out;
        if (!accumulate(ck, z, &out)) {
            for (auto& v : z) v += 1e-9 * h_;
            if (!accumulate(ck, z, &out))
                throw nonremovable_singularity("leray eval: singular after perturbation");
        }
        const double scale = ipow(h_ / H_, d) * ipow(1.0 / H_, mi_order(alpha));
        for (auto& v : out) v *= scale;
        return out;
    }

    std::vector<std::vector<double>> eval_many(const std::vector<std::vector<double>>& pts,
                                               const MultiIndex& alpha) const {
        std::vector<std::vector<double>> out(pts.size());
        kern_->view(alpha);
        parallel_for(pts.size(), [&](std::size_t i) { out[i] = eval(pts[i], alpha); });
        return out;
    }

  private:
    bool accumulate(const CompiledKernel& ck, const std::vector<double>& x,
                    std::vector<double>* out) const {
        const int d = gdata_.dim;
        out->assign(static_cast<std::size_t>(d), 0.0);
        std::vector<double> y(static_cast<std::size_t>(d));
        std::vector<double> packed(static_cast<std::size_t>(ck.n_entries()));
        std::vector<int> iv(static_cast<std::size_t>(d), 0);
        for (std::size_t flat = 0; flat < gdata_.num_nodes(); ++flat) {
            for (int s = 0; s < d; ++s)
                y[static_cast<std::size_t>(s)] =
                    (x[static_cast<std::size_t>(s)] - gdata_.origin[static_cast<std::size_t>(s)] -
                     h_ * iv[static_cast<std::size_t>(s)]) /
                    H_;
            if (!ck.eval_stencil(y.data(), packed.data())) return false;
            const double* g = gdata_.value_at(flat);
            int idx = 0;
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j, ++idx) {
                    (*out)[static_cast<std::size_t>(i)] += packed[static_cast<std::size_t>(idx)] * g[j];
                    if (i != j)
                        (*out)[static_cast<std::size_t>(j)] +=
                            packed[static_cast<std::size_t>(idx)] * g[i];
                }
            gdata_.advance(iv);
        }
        return true;
    }

    BoundaryInterpolant interp_;
    std::shared_ptr<const KernelEvaluator> kern_;
    GridField gdata_;
    double h_, H_;
    HodgePart part_;
};

// Builds the combined evaluator from samples on the Omega-lattice:
// ring nodes (Omega minus V) carry the interpolant, all nodes carry g = f - I f.
inline LerayEvaluator build_leray_qi(const GridField& samples, const BoundedConfig& cfg,
                                     HodgePart part) {
    cfg.validate();
    samples.validate();
    const int d = samples.dim;
    if (d != cfg.dim()) throw invalid_argument_error("build_leray_qi: dim mismatch");

    auto in_V = [&](const std::vector<double>& x) {
        for (int s = 0; s < d; ++s)
            if (x[static_cast<std::size_t>(s)] < cfg.V.lo[static_cast<std::size_t>(s)] - 1e-12 ||
                x[static_cast<std::size_t>(s)] > cfg.V.hi[static_cast<std::size_t>(s)] + 1e-12)
                return false;
        return true;
    };

    std::vector<std::vector<double>> ring_pts;
    std::vector<std::vector<double>> ring_vals;
    std::vector<int> iv(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < samples.num_nodes(); ++flat) {
        auto x = samples.node_point(iv);
        if (!in_V(x)) {
            ring_pts.push_back(x);
            const double* f = samples.value_at(flat);
            ring_vals.push_back(std::vector<double>(f, f + d));
        }
        samples.advance(iv);
    }
    if (ring_pts.empty()) throw empty_ring("build_leray_qi: no lattice node in Omega \\ V");

    BoundaryInterpolant interp = fit_interpolant(ring_pts, ring_vals, cfg.shape());

    GridField g = samples;
    std::vector<std::vector<int>> ivs;
    ivs.reserve(samples.num_nodes());
    std::fill(iv.begin(), iv.end(), 0);
    for (std::size_t flat = 0; flat < samples.num_nodes(); ++flat) {
        ivs.push_back(iv);
        samples.advance(iv);
    }
    parallel_for(samples.num_nodes(), [&](std::size_t flat) {
        auto x = samples.node_point(ivs[flat]);
        auto fi = interp.eval(x, InterpPart::full);
        double* gv = g.value_at(flat);
        for (int s = 0; s < d; ++s) gv[s] -= fi[static_cast<std::size_t>(s)];
    });

    auto kern = std::make_shared<KernelEvaluator>(
        part == HodgePart::div ? KernelSpec::divergence_free(cfg.ell, cfg.k, d)
                               : KernelSpec::curl_free(cfg.ell, cfg.k, d));
    return LerayEvaluator(std::move(interp), std::move(kern), std::move(g), cfg.h,
                          cfg.scale_H(), part);
}

struct LerayDecomposition {
    std::vector<std::vector<double>> div_part;
    std::vector<std::vector<double>> curl_part;
    std::vector<std::vector<double>> reconstruction;
};

inline LerayDecomposition leray_decompose(const GridField& samples, const BoundedConfig& cfg,
                                          const std::vector<std::vector<double>>& eval_points) {
    auto dv = build_leray_qi(samples, cfg, HodgePart::div);
    auto cl = build_leray_qi(samples, cfg, HodgePart::curl);
    LerayDecomposition out;
    MultiIndex a0 = mi_zero(samples.dim);
    out.div_part = dv.eval_many(eval_points, a0);
    out.curl_part = cl.eval_many(eval_points, a0);
    out.reconstruction.resize(eval_points.size());
    for (std::size_t i = 0; i < eval_points.size(); ++i) {
        out.reconstruction[i] = out.div_part[i];
        for (std::size_t s = 0; s < out.reconstruction[i].size(); ++s)
            out.reconstruction[i][s] += out.curl_part[i][s];
    }
    return out;
}

}  // namespace hodgeqi

#endif  // HODGEQI_BOUNDED_SCHEME_HPP
