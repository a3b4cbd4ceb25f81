#ifndef HODGEQI_BOUNDARY_INTERP_HPP
#define HODGEQI_BOUNDARY_INTERP_HPP

// Matrix-valued RBF interpolation near the boundary.  The generalized
// interpolant is built from the C^8 Matern scalar Phi with
//
//     K_div  = (-Lap I + grad grad^T) Phi,
//     K_curl = -grad grad^T Phi,
//     K      = K_div + K_curl = -Lap Phi I,
//
// so the collocation system is d decoupled copies of the positive-definite
// scalar kernel -Lap Phi, while the fitted coefficients expose the
// divergence-free and curl-free parts through the block kernels.

#include <Eigen/Dense>
#include <array>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "hodgeqi/matern.hpp"

namespace hodgeqi {

enum class InterpPart { full, div, curl };

// Default Matern shape for a boundary ring with fill distance `fill`.
// Stationary scaling keeps the collocation conditioning bounded over an
// h-sweep; the 0.5 multiplier is calibrated so ring errors keep decreasing
// instead of saturating.
inline double default_ring_shape(double fill) { return 0.5 / fill; }

namespace detail {

// term c * x^mono * (r^2)^r2pow * (D_r^n phi)(r)
struct MTerm {
    double c = 0.0;
    MultiIndex mono;
    int r2pow = 0;
    int dr_order = 0;
};

inline std::vector<MTerm> mterm_differentiate(const std::vector<MTerm>& in, int axis) {
    std::vector<MTerm> out;
    out.reserve(in.size() * 3);
    for (const auto& t : in) {
        if (t.mono[static_cast<std::size_t>(axis)] > 0) {
            MTerm a = t;
            a.c *= t.mono[static_cast<std::size_t>(axis)];
            a.mono[static_cast<std::size_t>(axis)] -= 1;
            out.push_back(std::move(a));
        }
        if (t.r2pow != 0) {
            MTerm b = t;
            b.c *= 2.0 * t.r2pow;
            b.mono[static_cast<std::size_t>(axis)] += 1;
            b.r2pow -= 1;
            out.push_back(std::move(b));
        }
        MTerm c = t;
        c.mono[static_cast<std::size_t>(axis)] += 1;
        c.dr_order += 1;
        if (c.dr_order > kMaternMaxDr)
            throw depth_limit_exceeded("boundary_interp: derivative order exceeds C^8 budget");
        out.push_back(std::move(c));
    }
    return out;
}

// packed symmetric entries (i <= j) of one kernel part, before derivatives
inline std::vector<std::vector<MTerm>> part_entries(int dim, InterpPart part) {
    std::vector<std::vector<MTerm>> entries;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            std::vector<MTerm> e;
            auto xx = [&](double c) {
                MTerm t;
                t.c = c;
                t.mono = mi_zero(dim);
                t.mono[static_cast<std::size_t>(i)] += 1;
                t.mono[static_cast<std::size_t>(j)] += 1;
                t.dr_order = 2;
                e.push_back(std::move(t));
            };
            auto diag = [&](double c, int r2pow, int n) {
                MTerm t;
                t.c = c;
                t.mono = mi_zero(dim);
                t.r2pow = r2pow;
                t.dr_order = n;
                e.push_back(std::move(t));
            };
            if (part == InterpPart::div || part == InterpPart::full) {
                if (i == j) {
                    diag(1.0 - dim, 0, 1);  // (1-d) D_r^1
                    diag(-1.0, 1, 2);       // -r^2 D_r^2
                }
                xx(1.0);
            }
            if (part == InterpPart::curl || part == InterpPart::full) {
                if (i == j) diag(-1.0, 0, 1);
                xx(-1.0);
            }
            entries.push_back(std::move(e));
        }
    return entries;
}

}  // namespace detail

class BoundaryInterpolant {
  public:
    BoundaryInterpolant(std::vector<std::vector<double>> centers,
                        std::vector<std::vector<double>> coefficients, double eps)
        : centers_(std::move(centers)), coeffs_(std::move(coefficients)), eps_(eps) {
        dim_ = centers_.empty() ? 0 : static_cast<int>(centers_.front().size());
    }

    int dim() const { return dim_; }
    double shape() const { return eps_; }
    double condition_estimate() const { return cond_; }
    std::size_t num_centers() const { return centers_.size(); }
    const std::vector<std::vector<double>>& centers() const { return centers_; }

    std::vector<double> eval(std::span<const double> x, InterpPart part,
                             const MultiIndex& alpha) const {
        if (part == InterpPart::full) {
            // literally div + curl so the split sums exactly
            auto a = eval(x, InterpPart::div, alpha);
            auto b = eval(x, InterpPart::curl, alpha);
            for (std::size_t s = 0; s < a.size(); ++s) a[s] += b[s];
            return a;
        }
        const auto& compiled = view(part, alpha);
        const auto& polys = detail::matern_radial_polys();
        const int d = dim_;
        std::vector<double> out(static_cast<std::size_t>(d), 0.0);
        std::vector<double> y(static_cast<std::size_t>(d));
        std::vector<double> packed(compiled.size());
        std::array<double, kMaternMaxDr + 1> drv{};
        for (std::size_t j = 0; j < centers_.size(); ++j) {
            double r2 = 0.0;
            for (int s = 0; s < d; ++s) {
                y[static_cast<std::size_t>(s)] =
                    x[static_cast<std::size_t>(s)] - centers_[j][static_cast<std::size_t>(s)];
                r2 += y[static_cast<std::size_t>(s)] * y[static_cast<std::size_t>(s)];
            }
            const double t = eps_ * std::sqrt(r2);
            const double et = std::exp(-t);
            double ep = 1.0;
            for (int n = 0; n <= kMaternMaxDr; ++n) {
                drv[static_cast<std::size_t>(n)] =
                    ep * et * detail::horner(polys[static_cast<std::size_t>(n)], t);
                ep *= eps_ * eps_;
            }
            for (std::size_t e = 0; e < compiled.size(); ++e) {
                double acc = 0.0;
                for (const auto& t : compiled[e]) {
                    double v = t.c * drv[static_cast<std::size_t>(t.dr_order)];
                    for (int s = 0; s < d; ++s)
                        for (int p = 0; p < t.mono[static_cast<std::size_t>(s)]; ++p)
                            v *= y[static_cast<std::size_t>(s)];
                    if (t.r2pow != 0) v *= ipow(r2, t.r2pow);
                    acc += v;
                }
                packed[e] = acc;
            }
            const auto& c = coeffs_[j];
            int idx = 0;
            for (int i = 0; i < d; ++i)
                for (int jj = i; jj < d; ++jj, ++idx) {
                    out[static_cast<std::size_t>(i)] += packed[static_cast<std::size_t>(idx)] * c[static_cast<std::size_t>(jj)];
                    if (i != jj)
                        out[static_cast<std::size_t>(jj)] +=
                            packed[static_cast<std::size_t>(idx)] * c[static_cast<std::size_t>(i)];
                }
        }
        return out;
    }

    std::vector<double> eval(std::span<const double> x, InterpPart part) const {
        return eval(x, part, mi_zero(dim_));
    }

    void set_condition_estimate(double c) { cond_ = c; }

  private:
    const std::vector<std::vector<detail::MTerm>>& view(InterpPart part,
                                                        const MultiIndex& alpha) const {
        if (mi_order(alpha) > 2)
            throw depth_limit_exceeded("BoundaryInterpolant: |alpha| capped at 2");
        std::lock_guard<std::mutex> lock(*mutex_);
        auto key = std::make_pair(static_cast<int>(part), alpha);
        auto it = views_.find(key);
        if (it == views_.end()) {
            auto entries = detail::part_entries(dim_, part);
            for (auto& e : entries)
                for (int s = 0; s < dim_; ++s)
                    for (int i = 0; i < alpha[static_cast<std::size_t>(s)]; ++i)
                        e = detail::mterm_differentiate(e, s);
            it = views_.emplace(key, std::move(entries)).first;
        }
        return it->second;
    }

    std::vector<std::vector<double>> centers_;
    std::vector<std::vector<double>> coeffs_;
    double eps_;
    int dim_ = 0;
    double cond_ = 0.0;
    mutable std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
    mutable std::map<std::pair<int, MultiIndex>, std::vector<std::vector<detail::MTerm>>>
        views_;
};

// Solves the collocation system K(x_i - x_j) c_j = f(x_i).  K = -Lap Phi I is
// block diagonal per component, so one symmetric factorization serves all d
// right-hand sides.
inline BoundaryInterpolant fit_interpolant(const std::vector<std::vector<double>>& centers,
                                           const std::vector<std::vector<double>>& values,
                                           double eps) {
    if (centers.empty()) throw invalid_argument_error("fit_interpolant: no centers");
    if (values.size() != centers.size())
        throw invalid_argument_error("fit_interpolant: centers/values size mismatch");
    if (eps <= 0) throw invalid_argument_error("fit_interpolant: eps must be > 0");
    const int d = static_cast<int>(centers.front().size());
    const int n = static_cast<int>(centers.size());

    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double r2 = 0.0;
            for (int s = 0; s < d; ++s) {
                double dd = centers[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] -
                            centers[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)];
                r2 += dd * dd;
            }
            if (i != j && r2 == 0.0)
                throw singular_system("fit_interpolant: duplicate centers");
            double r = std::sqrt(r2);
            // -Lap Phi = -(d D_r^1 + r^2 D_r^2)
            double v = -(d * matern_dr(1, r, eps) + r2 * matern_dr(2, r, eps));
            K(i, j) = v;
            K(j, i) = v;
        }
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    if (ldlt.info() != Eigen::Success)
        throw singular_system("fit_interpolant: factorization failed");
    Eigen::VectorXd dg = ldlt.vectorD();
    double dmin = dg.cwiseAbs().minCoeff(), dmax = dg.cwiseAbs().maxCoeff();
    double cond = (dmin > 0.0) ? dmax / dmin : std::numeric_limits<double>::infinity();
    if (!(dmin > 0.0) || cond > 1e15)
        throw singular_system("fit_interpolant: system numerically singular, cond~" +
                              std::to_string(cond));

    Eigen::MatrixXd rhs(n, d);
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < d; ++s) rhs(i, s) = values[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
    Eigen::MatrixXd sol = ldlt.solve(rhs);

    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(n),
                                            std::vector<double>(static_cast<std::size_t>(d)));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < d; ++s) coeffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = sol(i, s);

    BoundaryInterpolant interp(centers, std::move(coeffs), eps);
    interp.set_condition_estimate(cond);
    return interp;
}

}  // namespace hodgeqi

#endif  // HODGEQI_BOUNDARY_INTERP_HPP
